//! One PASS/FAIL line per acceptance criterion, written straight to stderr
//! so the table shows up without `--nocapture`.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qorbit::catcher::{bite, catcher_init, check_invariants, run_catch};
use qorbit::exactnum::{enumerate_rationals, quad_cmp, QuadPoint, Rational};
use qorbit::orbitals::{are_conjugate, conjugator_bounded, in_b, signature};
use qorbit::pmaut::{gold, PMAut};
use qorbit::sampler::{
    christensen_sequence, cut_random_aut, group_metric_dist, not_in_b_witness, phi_sample, prefix_words, random_pm,
    Certificate, PointMap, RandomParams, Word,
};

type Outcome = Result<String, String>;

fn affine(a: i64, b: i64) -> PMAut {
    PMAut::affine(Rational::from(a), Rational::from(b))
}

fn within(limit: Duration, start: Instant, detail: String) -> Outcome {
    let took = start.elapsed();
    if took < limit {
        Ok(format!("{detail} in {took:.2?}"))
    } else {
        Err(format!("{detail} but took {took:.2?} (limit {limit:?})"))
    }
}

// --- criterion 1 ---------------------------------------------------------

const DIGITS: u32 = 60;

/// `value · den · 10^DIGITS` enclosed in an integer interval, where `den` is
/// a common positive denominator of the rational parts.
fn enclose(x: &QuadPoint, den: &BigInt, scale: &BigInt) -> (BigInt, BigInt) {
    let p = (x.p().inner() * den).to_integer() * scale;
    let q = (x.q().inner() * den).to_integer();
    if q.is_zero() {
        return (p.clone(), p);
    }
    let s = (x.radicand() * scale * scale).sqrt();
    let (a, b) = (&q * &s, &q * (&s + 1));
    if q.is_positive() {
        (&p + a, p + b)
    } else {
        (&p + b, p + a)
    }
}

/// Independent comparison by 60-digit integer interval arithmetic. Overlap
/// of the enclosures counts as equality.
fn oracle_cmp(a: &QuadPoint, b: &QuadPoint) -> Ordering {
    let den = Rational::common_denominator([a.p(), a.q(), b.p(), b.q()]);
    let scale = BigInt::from(10).pow(DIGITS);
    let (alo, ahi) = enclose(a, &den, &scale);
    let (blo, bhi) = enclose(b, &den, &scale);
    if ahi < blo {
        Ordering::Less
    } else if bhi < alo {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

fn coeff(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.random_range(-1_000_000i64..=1_000_000), rng.random_range(1i64..=1_000_000)).unwrap()
}

fn random_quad(rng: &mut ChaCha8Rng) -> QuadPoint {
    QuadPoint::new(coeff(rng), coeff(rng), rng.random_range(0i64..=1000))
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut bad = 0;
    for i in 0..10_000 {
        let a = random_quad(&mut rng);
        let b = match i % 5 {
            // Near ties: same irrational part, rational parts one unit of
            // 10^-12 apart, or an exact tie written with a square factor.
            0 => QuadPoint::new(a.p() + Rational::new(rng.random_range(-1i64..=1), 1_000_000_000_000i64).unwrap(), a.q().clone(), a.radicand().clone()),
            1 if !a.radicand().is_zero() => {
                QuadPoint::new(a.p().clone(), a.q() * Rational::ratio(1, 3), a.radicand() * 9)
            }
            _ => random_quad(&mut rng),
        };
        if quad_cmp(&a, &b) != oracle_cmp(&a, &b) {
            bad += 1;
        }
    }
    if bad > 0 {
        return Err(format!("{bad} disagreements in 10000 comparisons"));
    }
    within(Duration::from_secs(10), start, "10000 comparisons, 0 disagreements".into())
}

// --- criterion 2 ---------------------------------------------------------

fn sample_points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Rational> {
    (0..n)
        .map(|_| Rational::new(rng.random_range(-4000i64..=4000), rng.random_range(1i64..=64)).unwrap())
        .collect()
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let params = RandomParams::default();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    for i in 0..500u64 {
        let f = random_pm(2 * i, &params);
        let g = random_pm(2 * i + 1, &params);
        let h = g.invert().compose(&f);
        let left = f.compose(&g).compose(&h);
        let right = f.compose(&g.compose(&h));
        if left != right {
            return Err(format!("pair {i}: associativity fails as automorphisms"));
        }
        for x in sample_points(&mut rng, 100) {
            let direct = f.eval(&g.eval(&h.eval(&x)));
            if left.eval(&x) != direct || right.eval(&x) != direct {
                return Err(format!("pair {i}: associativity fails at {x}"));
            }
        }
        for k in [&f, &g] {
            if k.compose(&k.invert()) != PMAut::identity() || k.invert().compose(k) != PMAut::identity() {
                return Err(format!("pair {i}: f∘f⁻¹ is not the canonical identity"));
            }
        }
        let fg = f.compose(&g);
        for _ in 0..1000 {
            let pts = sample_points(&mut rng, 2);
            let (x, y) = match pts[0].cmp(&pts[1]) {
                Ordering::Less => (&pts[0], &pts[1]),
                Ordering::Greater => (&pts[1], &pts[0]),
                Ordering::Equal => continue,
            };
            if fg.eval(x) >= fg.eval(y) {
                return Err(format!("pair {i}: not increasing at {x} < {y}"));
            }
        }
    }
    within(Duration::from_secs(30), start, "500 pairs".into())
}

// --- criterion 3 ---------------------------------------------------------

fn criterion_3() -> Outcome {
    let golden = QuadPoint::new(Rational::ratio(-1, 2), Rational::ratio(1, 2), 5);
    let fp = gold().fixed_point_set();
    if fp.isolated.len() != 1 || quad_cmp(&fp.isolated[0], &golden) != Ordering::Equal || !fp.identity_intervals.is_empty() {
        return Err(format!("gold fixed points {:?}", fp.isolated));
    }
    for (f, want) in [(gold(), "+ . -"), (affine(2, 0), "- 0 +"), (affine(1, 1), "+")] {
        let got = signature(&f).to_string();
        if got != want {
            return Err(format!("signature of {f} is {got:?}, want {want:?}"));
        }
    }
    Ok("gold, 2x, x+1 exact".into())
}

// --- criterion 4 ---------------------------------------------------------

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let params = RandomParams::default();
    for i in 0..300u64 {
        let f = random_pm(10_000 + 2 * i, &params);
        let h = random_pm(10_001 + 2 * i, &params);
        let (a, b) = (signature(&f), signature(&f.conjugate_by(&h)));
        if a != b {
            return Err(format!("pair {i}: {a} vs {b}"));
        }
    }
    within(Duration::from_secs(60), start, "300 conjugates".into())
}

// --- criterion 5 ---------------------------------------------------------

fn curated() -> Vec<(PMAut, PMAut, bool)> {
    let h = random_pm(55, &RandomParams::default());
    let f = random_pm(7, &RandomParams::default());
    vec![
        (affine(1, 1), affine(1, 2), true),
        (affine(2, 0), affine(3, 0), true),
        (gold(), gold().conjugate_by(&h), true),
        (f.clone(), f, true),
        (affine(1, -1), affine(1, -3), true),
        (affine(1, 1), affine(2, 0), false),
        (affine(1, 1), affine(1, -1), false),
        (gold(), gold().invert(), false),
        (affine(2, 0), PMAut::affine(Rational::ratio(1, 2), Rational::zero()), false),
        (affine(1, 1), PMAut::identity(), false),
    ]
}

fn criterion_5() -> Outcome {
    for (i, (f, g, want)) in curated().into_iter().enumerate() {
        let decided = are_conjugate(&f, &g);
        let oracle = conjugator_bounded(&f, &g, 12);
        if decided != want || oracle.found().is_some() != want {
            return Err(format!("pair {i}: decided {decided}, oracle {}", oracle.found().is_some()));
        }
        if let Some(k) = oracle.found() {
            k.verify(&f, &g).map_err(|e| format!("pair {i}: {e}"))?;
        }
    }
    Ok("10 curated pairs agree, 5 conjugators verified".into())
}

// --- criteria 6 and 7 ----------------------------------------------------

fn suites() -> Vec<(&'static str, PMAut, Vec<PMAut>, u64)> {
    vec![
        ("x+1 / {x+2}", affine(1, 1), vec![affine(1, 2)], 20),
        ("x+1 / {x+2, 2x+1}", affine(1, 1), vec![affine(1, 2), affine(2, 1)], 20),
        ("gold / {x+2, x+3, 2x+1}", gold(), vec![affine(1, 2), affine(1, 3), affine(2, 1)], 30),
    ]
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut steps = 0;
    for (name, f, ks, stages) in suites() {
        let mut state = catcher_init(&f, &ks).map_err(|e| format!("{name}: {e}"))?;
        for _ in 0..3 * stages {
            state.step().map_err(|e| format!("{name}: {e}"))?;
            steps += 1;
            if let Some(v) = check_invariants(&state).first() {
                return Err(format!("{name} after step {}: ({}) {}", state.steps(), v.condition, v.witness));
            }
            let n = state.steps();
            let dom: BTreeSet<&Rational> = state.graph().map(|(p, _)| p).collect();
            let img: BTreeSet<&Rational> = state.graph().map(|(_, q)| q).collect();
            let dom_ok = (1..=n.div_ceil(3)).all(|j| dom.contains(&enumerate_rationals(j)));
            let img_ok = (1..=(n + 1) / 3).all(|j| img.contains(&enumerate_rationals(j)));
            if !dom_ok || !img_ok {
                return Err(format!("{name}: progress fails after step {n}"));
            }
        }
        let (_, report) = run_catch(&f, &ks, stages).map_err(|e| format!("{name}: {e}"))?;
        if let Some(m) = report.members.iter().find(|m| !m.consistent) {
            return Err(format!("{name}: member {} sign pattern {}", m.index, m.sign_pattern));
        }
    }
    within(Duration::from_secs(60), start, format!("{steps} steps, no violations"))
}

fn criterion_7() -> Outcome {
    for (name, f, ks, stages) in suites() {
        let (_, report) = run_catch(&f, &ks, stages).map_err(|e| format!("{name}: {e}"))?;
        let want = signature(&f);
        for m in &report.members {
            if !m.stabilized || m.hull_signature != want {
                return Err(format!(
                    "{name}: member {} half {} full {} target {want}",
                    m.index, m.half_signature, m.hull_signature
                ));
            }
        }
    }
    Ok("all members stable and equal to the target signature".into())
}

// --- criterion 8 ---------------------------------------------------------

fn criterion_8() -> Outcome {
    let (g, report) = bite(&affine(2, 0), &[affine(2, 0), affine(3, 0)], 15).map_err(|e| e.to_string())?;
    if g.eval(&Rational::zero()) != Rational::zero() {
        return Err(format!("g(0) = {}", g.eval(&Rational::zero())));
    }
    let reparsed = PMAut::from_json(&g.to_json()).map_err(|e| e.to_string())?;
    if reparsed != g {
        return Err("g does not survive a JSON round trip".into());
    }
    if let Some(iv) = report.intervals.iter().find(|iv| !iv.consistent) {
        return Err(format!("interval ({}, {}) inconsistent", iv.lo, iv.hi));
    }
    Ok(format!("{} intervals glued, g has {} pieces", report.intervals.len(), g.piece_count()))
}

// --- criterion 9 ---------------------------------------------------------

fn bits_of(mask: u32, len: usize) -> Vec<bool> {
    (0..len).map(|j| mask >> j & 1 == 1).collect()
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let seq = christensen_sequence(8, 9);
    if let Some(i) = seq.members.iter().position(|g| !in_b(g)) {
        return Err(format!("member {} not in B", i + 1));
    }
    for i in 0..seq.len() {
        let bound = Rational::dyadic(1.into(), i as u32 + 2);
        for w in prefix_words(&seq.members[..i]) {
            let mut longer = w.clone();
            longer.0.push(&seq.members[i]);
            let d = group_metric_dist(&longer, &w, 40);
            if d >= bound {
                return Err(format!("member {}: step {d} not below {bound}", i + 1));
            }
        }
    }
    let n = seq.len();
    for i in 1..=10u64 {
        let r = enumerate_rationals(i);
        let m = seq.stable_from(i);
        let mut seen: BTreeMap<u32, (Rational, Rational)> = BTreeMap::new();
        for mask in 0..1u32 << n {
            let w = seq.word(&bits_of(mask, n));
            let v = (w.apply(&r), w.apply_inv(&r));
            let key = mask & ((1 << m) - 1);
            if *seen.entry(key).or_insert_with(|| v.clone()) != v {
                return Err(format!("value at r_{i} moves after prefix length {m}"));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20 {
        let bits: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
        let p = phi_sample(&seq, &bits);
        let w: Word<'_> = seq.word(&bits);
        for j in 1..=200 {
            let r = enumerate_rationals(j);
            let v = p.eval(&r);
            if v < r || v != w.apply(&r) {
                return Err(format!("sample {bits:?} at {r} gives {v}"));
            }
        }
    }
    within(Duration::from_secs(30), start, "8 members, 255 prefix bounds, stable at r_1..r_10".into())
}

// --- criterion 10 --------------------------------------------------------

fn criterion_10() -> Outcome {
    let start = Instant::now();
    let cut: QuadPoint = "sqrt2-1".parse().unwrap();
    let (p, q) = (Rational::zero(), Rational::one());
    let mut kinds: BTreeMap<&'static str, usize> = BTreeMap::new();
    for t in 0..100u64 {
        let mut f = cut_random_aut(2 * t, cut.clone(), p.clone(), q.clone()).map_err(|e| e.to_string())?;
        let mut g = cut_random_aut(2 * t + 1, cut.clone(), p.clone(), q.clone()).map_err(|e| e.to_string())?;
        let cert = not_in_b_witness(&mut f, &mut g, 200).map_err(|e| e.to_string())?;
        *kinds.entry(cert.kind()).or_default() += 1;
        match &cert {
            Certificate::Descent { r_prime, image } => {
                let again = f.eval_inv(&g.eval(r_prime));
                if &again != image || again >= *r_prime {
                    return Err(format!("trial {t}: {cert} does not re-check"));
                }
            }
            Certificate::SplitCut { below, above } => {
                let (b, a) = (QuadPoint::rational(below.clone()), QuadPoint::rational(above.clone()));
                let moves = |x: &Rational, f: &mut _, g: &mut _| witness_image(f, g, x) != *x;
                if quad_cmp(&b, &cut).is_ge() || quad_cmp(&a, &cut).is_le() || !moves(below, &mut f, &mut g) || !moves(above, &mut f, &mut g) {
                    return Err(format!("trial {t}: {cert} does not re-check"));
                }
            }
            other => return Err(format!("trial {t}: {other}")),
        }
        if !f.is_consistent() || !g.is_consistent() {
            return Err(format!("trial {t}: lazy maps inconsistent"));
        }
    }
    within(Duration::from_secs(60), start, format!("{kinds:?}"))
}

fn witness_image(f: &mut qorbit::sampler::LazyAut, g: &mut qorbit::sampler::LazyAut, x: &Rational) -> Rational {
    let y = g.eval(x);
    f.eval_inv(&y)
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("exact comparison vs interval oracle", criterion_1),
        ("group laws", criterion_2),
        ("fixed points and signatures", criterion_3),
        ("conjugation invariance", criterion_4),
        ("conjugacy vs back-and-forth", criterion_5),
        ("catcher invariants", criterion_6),
        ("catcher stabilization", criterion_7),
        ("bite with fixed points", criterion_8),
        ("christensen sampler", criterion_9),
        ("witness certificates", criterion_10),
    ];
    let mut failed = Vec::new();
    let mut log = std::io::stderr();
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => _ = writeln!(log, "PASS {:>2} {name}: {detail}", i + 1),
            Err(detail) => {
                _ = writeln!(log, "FAIL {:>2} {name}: {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
