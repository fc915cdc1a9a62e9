//! The back-and-forth construction that, for a good fixed-point-free `f` and
//! a finite family `K`, builds `g` with `g⁻¹h` conjugate to `f` for every
//! `h ∈ K`; plus the chart reduction for targets with rational fixed points.
//!
//! The state is a finite partial map `g: H → ℚ` together with `φ(p, h)`, the
//! orbital of `f` that `p` is meant to occupy under `g⁻¹h`.

mod bite;
mod cases;
mod chart;

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exactnum::{enumerate_rationals, Rational};
use crate::orbitals::{hull_signature, is_good, orbital_decomposition, signature, Orbital, Signature};
use crate::pmaut::{Mobius, PMAut, PmError};

pub use bite::{bite, BiteInterval, BiteReport};
pub use cases::Addition;
pub use chart::{interval_chart, Chart};

use cases::Frame;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatchError {
    #[error("NOT_GOOD")]
    NotGood,
    #[error("HAS_FIXED_POINT")]
    HasFixedPoint,
    #[error("EMPTY_FAMILY")]
    EmptyFamily,
    #[error("EMPTY_H")]
    EmptyH,
    #[error("INVARIANT_BROKEN ({condition}) {witness}")]
    InvariantBroken { condition: String, witness: String },
    #[error("UNSUPPORTED {0}")]
    Unsupported(String),
    #[error(transparent)]
    Pm(#[from] PmError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CaseLabel {
    C1a,
    C1b,
    C1c,
    C1d,
    C1e,
    C2a,
    C2b,
    C2c,
    C2d,
    C3a,
    C3b,
    C3c,
    C3d,
    Skip,
}

impl CaseLabel {
    pub fn as_str(self) -> &'static str {
        use CaseLabel::*;
        match self {
            C1a => "1a",
            C1b => "1b",
            C1c => "1c",
            C1d => "1d",
            C1e => "1e",
            C2a => "2a",
            C2b => "2b",
            C2c => "2c",
            C2d => "2d",
            C3a => "3a",
            C3b => "3b",
            C3c => "3c",
            C3d => "3d",
            Skip => "skip",
        }
    }

    /// The label a case gets when it was run in the mirrored frame.
    fn mirrored(self) -> Self {
        match self {
            CaseLabel::C1b => CaseLabel::C1c,
            CaseLabel::C2a => CaseLabel::C2b,
            other => other,
        }
    }
}

impl fmt::Display for CaseLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for CaseLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AddedPoint {
    pub p: Rational,
    pub q: Rational,
    pub phi: Vec<usize>,
}

/// What one step did.
#[derive(Clone, Debug, Serialize)]
pub struct StepReport {
    pub n: u64,
    pub case: CaseLabel,
    pub added: Vec<AddedPoint>,
    pub choices: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub condition: String,
    pub witness: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}) {}", self.condition, self.witness)
    }
}

#[derive(Clone, Debug)]
pub struct CatcherState {
    f: PMAut,
    orbitals: Vec<Orbital>,
    parity: Vec<i8>,
    ks: Vec<PMAut>,
    ks_inv: Vec<PMAut>,
    ks_ref: Vec<PMAut>,
    ks_ref_inv: Vec<PMAut>,
    n: u64,
    g: BTreeMap<Rational, Rational>,
    g_inv: BTreeMap<Rational, Rational>,
    phi: BTreeMap<Rational, Vec<usize>>,
}

/// Starts the construction for target `f` and family `ks`.
pub fn catcher_init(f: &PMAut, ks: &[PMAut]) -> Result<CatcherState, CatchError> {
    if !is_good(f).is_good() {
        return Err(CatchError::NotGood);
    }
    let fx = f.fixed_point_set();
    if !fx.identity_intervals.is_empty() || fx.isolated.iter().any(|z| z.is_rational()) {
        return Err(CatchError::HasFixedPoint);
    }
    if ks.is_empty() {
        return Err(CatchError::EmptyFamily);
    }
    Ok(CatcherState::blank(f, ks))
}

impl CatcherState {
    fn blank(f: &PMAut, ks: &[PMAut]) -> Self {
        let orbitals = orbital_decomposition(f);
        let parity = orbitals.iter().map(|o| o.parity).collect();
        CatcherState {
            f: f.clone(),
            orbitals,
            parity,
            ks: ks.to_vec(),
            ks_inv: ks.iter().map(PMAut::invert).collect(),
            ks_ref: ks.iter().map(PMAut::reflect).collect(),
            ks_ref_inv: ks.iter().map(|h| h.reflect().invert()).collect(),
            n: 0,
            g: BTreeMap::new(),
            g_inv: BTreeMap::new(),
            phi: BTreeMap::new(),
        }
    }

    /// A state assembled by hand, without any invariant checks; `points`
    /// lists `(p, g(p), φ(p, ·))`. Meant for exercising `check_invariants`.
    pub fn from_parts(
        f: &PMAut,
        ks: &[PMAut],
        n: u64,
        points: Vec<(Rational, Rational, Vec<usize>)>,
    ) -> Self {
        let mut s = CatcherState::blank(f, ks);
        s.n = n;
        for (p, q, row) in points {
            s.g.insert(p.clone(), q.clone());
            s.g_inv.insert(q, p.clone());
            s.phi.insert(p, row);
        }
        s
    }

    pub fn target(&self) -> &PMAut {
        &self.f
    }

    pub fn orbitals(&self) -> &[Orbital] {
        &self.orbitals
    }

    pub fn family(&self) -> &[PMAut] {
        &self.ks
    }

    pub fn steps(&self) -> u64 {
        self.n
    }

    /// The points of `H` with their `g` values, in increasing order.
    pub fn graph(&self) -> impl Iterator<Item = (&Rational, &Rational)> {
        self.g.iter()
    }

    pub fn phi(&self, p: &Rational) -> Option<&[usize]> {
        self.phi.get(p).map(Vec::as_slice)
    }

    pub fn len(&self) -> usize {
        self.g.len()
    }

    pub fn is_empty(&self) -> bool {
        self.g.is_empty()
    }

    /// The orbital index `O_{m+1}` of the cyclic enumeration.
    fn orbital_target(&self, m: u64) -> usize {
        (m % self.orbitals.len() as u64) as usize
    }

    fn frame(&self) -> Frame<'_> {
        Frame {
            ks: &self.ks,
            ks_inv: &self.ks_inv,
            parity: &self.parity,
            g: self.g.clone(),
            g_inv: self.g_inv.clone(),
            phi: self.phi.clone(),
            choices: Vec::new(),
        }
    }

    /// The same state seen through `x ↦ −x`. Orbital indices reverse and
    /// parities flip.
    fn mirrored_frame<'a>(&'a self, parity: &'a [i8]) -> Frame<'a> {
        let k = self.orbitals.len();
        Frame {
            ks: &self.ks_ref,
            ks_inv: &self.ks_ref_inv,
            parity,
            g: self.g.iter().map(|(p, q)| (-p, -q)).collect(),
            g_inv: self.g.iter().map(|(p, q)| (-q, -p)).collect(),
            phi: self
                .phi
                .iter()
                .map(|(p, row)| (-p, row.iter().map(|j| k - 1 - j).collect()))
                .collect(),
            choices: Vec::new(),
        }
    }

    fn mirrored_parity(&self) -> Vec<i8> {
        self.parity.iter().rev().map(|s| -s).collect()
    }

    fn unmirror(&self, adds: Vec<Addition>) -> Vec<Addition> {
        let k = self.orbitals.len();
        adds.into_iter()
            .map(|a| Addition {
                p: -a.p,
                q: -a.q,
                phi: a.phi.into_iter().map(|j| k - 1 - j).collect(),
            })
            .collect()
    }

    /// One step of the construction.
    pub fn step(&mut self) -> Result<StepReport, CatchError> {
        let n = self.n;
        let m = n / 3;
        let mirrored_parity = self.mirrored_parity();
        let (label, adds, choices) = match n % 3 {
            0 => {
                let x = enumerate_rationals(m + 1);
                if self.g.contains_key(&x) {
                    (CaseLabel::Skip, Vec::new(), Vec::new())
                } else if self.g.is_empty() {
                    let mut fr = self.frame();
                    let (l, a) = fr.case_1a(&x, self.orbital_target(m))?;
                    (l, a, fr.choices)
                } else if &x > self.g.last_key_value().unwrap().0 {
                    let mut fr = self.frame();
                    let (l, a) = fr.case_1b(&x)?;
                    (l, a, fr.choices)
                } else if &x < self.g.first_key_value().unwrap().0 {
                    let mut fr = self.mirrored_frame(&mirrored_parity);
                    let (l, a) = fr.case_1b(&-&x)?;
                    (l.mirrored(), self.unmirror(a), fr.choices)
                } else {
                    let p1 = self.g.range(..&x).next_back().unwrap().0.clone();
                    let p2 = self.g.range(&x..).next().unwrap().0.clone();
                    let mut fr = self.frame();
                    let (l, a) = fr.case_1de(&x, &p1, &p2)?;
                    (l, a, fr.choices)
                }
            }
            1 => {
                let y = enumerate_rationals(m + 1);
                if self.g_inv.contains_key(&y) {
                    (CaseLabel::Skip, Vec::new(), Vec::new())
                } else if self.g_inv.is_empty() {
                    return Err(CatchError::InvariantBroken {
                        condition: "v".into(),
                        witness: "H is empty at an image step".into(),
                    });
                } else if &y > self.g_inv.last_key_value().unwrap().0 {
                    let mut fr = self.frame();
                    let (l, a) = fr.case_2a(&y)?;
                    (l, a, fr.choices)
                } else if &y < self.g_inv.first_key_value().unwrap().0 {
                    let mut fr = self.mirrored_frame(&mirrored_parity);
                    let (l, a) = fr.case_2a(&-&y)?;
                    (l.mirrored(), self.unmirror(a), fr.choices)
                } else {
                    let q1 = self.g_inv.range(..&y).next_back().unwrap().0.clone();
                    let q2 = self.g_inv.range(&y..).next().unwrap().0.clone();
                    let mut fr = self.frame();
                    let (l, a) = fr.case_2cd(&y, &q1, &q2)?;
                    (l, a, fr.choices)
                }
            }
            _ => {
                let target = self.orbital_target(m);
                if self.phi.values().any(|row| row[0] == target) {
                    (CaseLabel::Skip, Vec::new(), Vec::new())
                } else if self.parity[target] > 0 {
                    let mut fr = self.frame();
                    let (l, a) = fr.case_3(target)?;
                    (l, a, fr.choices)
                } else {
                    let k = self.orbitals.len();
                    let mut fr = self.mirrored_frame(&mirrored_parity);
                    let (l, a) = fr.case_3(k - 1 - target)?;
                    (l, self.unmirror(a), fr.choices)
                }
            }
        };
        let mut added = Vec::with_capacity(adds.len());
        for a in adds {
            if self.g.contains_key(&a.p) || self.g_inv.contains_key(&a.q) {
                return Err(CatchError::InvariantBroken {
                    condition: "i".into(),
                    witness: format!("step {n} ({label}) redefines {} -> {}", a.p, a.q),
                });
            }
            self.g.insert(a.p.clone(), a.q.clone());
            self.g_inv.insert(a.q.clone(), a.p.clone());
            self.phi.insert(a.p.clone(), a.phi.clone());
            added.push(AddedPoint { p: a.p, q: a.q, phi: a.phi });
        }
        self.n += 1;
        Ok(StepReport { n, case: label, added, choices })
    }
}

fn sign(x: &Rational) -> i8 {
    x.signum()
}

/// Evaluates conditions (ii)–(xi) on the state exactly. Condition (i) is a
/// property of successive states and is enforced by `step`.
pub fn check_invariants(state: &CatcherState) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut bad = |c: &str, w: String| out.push(Violation { condition: c.into(), witness: w });
    let pts: Vec<(&Rational, &Rational)> = state.g.iter().collect();
    let nk = state.ks.len();
    let vals: Vec<Vec<Rational>> =
        pts.iter().map(|(p, _)| state.ks.iter().map(|h| h.eval(p)).collect()).collect();
    let phi = |i: usize| &state.phi[pts[i].0];

    // (iii)
    for w in pts.windows(2) {
        if w[0].1 >= w[1].1 {
            bad("iii", format!("g({}) = {} >= g({}) = {}", w[0].0, w[0].1, w[1].0, w[1].1));
        }
    }
    // (iv)
    for i in 1..pts.len() {
        for h in 0..nk {
            if phi(i - 1)[h] > phi(i)[h] {
                bad("iv", format!("phi decreases between {} and {} for h{h}", pts[i - 1].0, pts[i].0));
            }
        }
    }
    // (v)
    let n = state.n;
    let in_h = n.div_ceil(3);
    for i in 1..=in_h {
        let r = enumerate_rationals(i);
        if !state.g.contains_key(&r) {
            bad("v", format!("r_{i} = {r} not in H after {n} steps"));
        }
    }
    let in_image = (n + 1) / 3;
    for i in 1..=in_image {
        let r = enumerate_rationals(i);
        if !state.g_inv.contains_key(&r) {
            bad("v", format!("r_{i} = {r} not in g(H) after {n} steps"));
        }
    }
    for m in 0..n / 3 {
        let o = state.orbital_target(m);
        for h in 0..nk {
            if !state.phi.values().any(|row| row[h] == o) {
                bad("v", format!("O_{} (orbital {o}) not in phi(H, h{h}) after {n} steps", m + 1));
            }
        }
    }
    // (vi), (vii), (x), (xi) on neighbouring pairs
    for i in 1..pts.len() {
        let (p1, q1) = pts[i - 1];
        let (p2, q2) = pts[i];
        let s1: Vec<i8> = (0..nk).map(|h| sign(&(&vals[i - 1][h] - q1))).collect();
        let s2: Vec<i8> = (0..nk).map(|h| sign(&(&vals[i][h] - q2))).collect();
        for a in 0..nk {
            for b in 0..nk {
                if s1[a] < 0 && s1[b] > 0 && s2[a] > 0 && s2[b] < 0 {
                    bad("vi", format!("h{a} and h{b} cross g in opposite directions on [{p1}, {p2}]"));
                }
            }
        }
        for h in 0..nk {
            if s1[h] > 0 && s2[h] > 0 && &vals[i - 1][h] < q2 {
                bad("vii", format!("h{h}({p1}) = {} < g({p2}) = {q2}", vals[i - 1][h]));
            }
            if s1[h] < 0 && s2[h] < 0 && &vals[i][h] > q1 {
                bad("vii", format!("h{h}({p2}) = {} > g({p1}) = {q1}", vals[i][h]));
            }
            let (o1, o2) = (phi(i - 1)[h], phi(i)[h]);
            if o1 != o2 && state.parity[o1] == state.parity[o2] {
                bad("x", format!("phi(., h{h}) repeats a parity between {p1} and {p2}"));
            }
        }
        for a in 0..nk {
            for b in a + 1..nk {
                let same_dir = (s1[a] > 0 && s2[a] < 0 && s1[b] > 0 && s2[b] < 0)
                    || (s1[a] < 0 && s2[a] > 0 && s1[b] < 0 && s2[b] > 0);
                if same_dir && (phi(i - 1)[a] != phi(i - 1)[b] || phi(i)[a] != phi(i)[b]) {
                    bad("xi", format!("h{a} and h{b} cross on [{p1}, {p2}] with different phi"));
                }
            }
        }
    }
    // (viii)
    for (i, (p, q)) in pts.iter().enumerate() {
        for h in 0..nk {
            let want = state.parity[phi(i)[h]];
            let got = sign(&(&vals[i][h] - *q));
            if want != got {
                bad("viii", format!("at {p}: sign(h{h} - g) = {got} but s(phi) = {want}"));
            }
        }
    }
    // (ix)
    if nk > 1 {
        let image = |h: usize| {
            let mut v: Vec<usize> = state.phi.values().map(|row| row[h]).collect();
            v.dedup();
            v
        };
        let first = image(0);
        for h in 1..nk {
            if image(h) != first {
                bad("ix", format!("phi(H, h{h}) differs from phi(H, h0)"));
            }
        }
    }
    out
}

/// Interpolates `g` affinely through `H`, with slope-1 tails.
pub fn extract_g(state: &CatcherState) -> Result<PMAut, CatchError> {
    let pts: Vec<(&Rational, &Rational)> = state.g.iter().collect();
    let (p0, q0) = *pts.first().ok_or(CatchError::EmptyH)?;
    let (pn, qn) = *pts.last().unwrap();
    let mut maps = vec![Mobius::translation(&(q0 - p0))];
    for w in pts.windows(2) {
        let slope = (w[1].1 - w[0].1) / (w[1].0 - w[0].0);
        let shift = w[0].1 - &slope * w[0].0;
        maps.push(Mobius::affine(&slope, &shift));
    }
    maps.push(Mobius::translation(&(qn - pn)));
    let breaks = pts.iter().map(|(p, _)| (*p).clone()).collect();
    Ok(PMAut::from_pieces(breaks, maps)?)
}

/// Per-member summary of a finished run.
#[derive(Clone, Debug, Serialize)]
pub struct MemberReport {
    pub index: usize,
    /// `+` or `-` for `sign(h(p) − g(p))` at each point of `H`, in order.
    pub sign_pattern: String,
    /// Whether the pattern agrees with the parities of `φ(·, h)`.
    pub consistent: bool,
    /// Signature of `g⁻¹h` on the open hull of `H`.
    pub hull_signature: Signature,
    /// The same signature after half as many stages.
    pub half_signature: Signature,
    pub stabilized: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct CatchReport {
    pub stages: u64,
    pub points: usize,
    /// Least and greatest points of `H`.
    pub hull: (Rational, Rational),
    pub target_signature: Signature,
    pub case_counts: BTreeMap<String, usize>,
    pub members: Vec<MemberReport>,
}

fn member_signatures(state: &CatcherState) -> Result<Vec<Signature>, CatchError> {
    let g = extract_g(state)?;
    let g_inv = g.invert();
    let lo = state.g.first_key_value().unwrap().0;
    let hi = state.g.last_key_value().unwrap().0;
    Ok(state
        .ks
        .iter()
        .map(|h| hull_signature(&g_inv.compose(h), lo, hi))
        .collect())
}

/// Runs `3·stages` steps, checking every invariant after each one.
pub fn run_catch(f: &PMAut, ks: &[PMAut], stages: u64) -> Result<(PMAut, CatchReport), CatchError> {
    run_catch_traced(f, ks, stages, |_| {})
}

/// `run_catch`, handing every step report to `on_step`.
pub fn run_catch_traced(
    f: &PMAut,
    ks: &[PMAut],
    stages: u64,
    mut on_step: impl FnMut(&StepReport),
) -> Result<(PMAut, CatchReport), CatchError> {
    let mut state = catcher_init(f, ks)?;
    let half_at = 3 * stages.div_ceil(2);
    let mut half = Vec::new();
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for _ in 0..3 * stages {
        let rep = state.step()?;
        if let Some(v) = check_invariants(&state).into_iter().next() {
            return Err(CatchError::InvariantBroken { condition: v.condition, witness: v.witness });
        }
        *counts.entry(rep.case.to_string()).or_default() += 1;
        on_step(&rep);
        if state.n == half_at {
            half = member_signatures(&state)?;
        }
    }
    let g = extract_g(&state)?;
    let full = member_signatures(&state)?;
    let members = state
        .ks
        .iter()
        .enumerate()
        .map(|(i, h)| {
            let mut pattern = String::new();
            let mut consistent = true;
            for (p, q) in &state.g {
                let s = sign(&(h.eval(p) - q));
                pattern.push(if s > 0 { '+' } else if s < 0 { '-' } else { '0' });
                consistent &= s == state.parity[state.phi[p][i]];
            }
            MemberReport {
                index: i,
                sign_pattern: pattern,
                consistent,
                hull_signature: full[i].clone(),
                half_signature: half[i].clone(),
                stabilized: full[i] == half[i],
            }
        })
        .collect();
    let report = CatchReport {
        stages,
        points: state.len(),
        hull: (
            state.g.first_key_value().unwrap().0.clone(),
            state.g.last_key_value().unwrap().0.clone(),
        ),
        target_signature: signature(f),
        case_counts: counts,
        members,
    };
    Ok((g, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pmaut::gold;

    fn r(n: i64, d: i64) -> Rational {
        Rational::ratio(n, d)
    }

    fn affine(a: i64, b: i64) -> PMAut {
        PMAut::affine(Rational::from(a), Rational::from(b))
    }

    #[test]
    fn init_preconditions() {
        let s = catcher_init(&affine(1, 1), &[affine(1, 2)]).unwrap();
        assert_eq!(s.orbitals().len(), 1);
        assert_eq!(catcher_init(&affine(2, 0), &[affine(1, 1)]).unwrap_err(), CatchError::HasFixedPoint);
        assert_eq!(catcher_init(&affine(1, 1), &[]).unwrap_err(), CatchError::EmptyFamily);
        let s = catcher_init(&gold(), &[affine(1, 2), affine(2, 1), affine(1, 3)]).unwrap();
        assert_eq!(s.orbitals().len(), 2);
    }

    #[test]
    fn first_steps_by_hand() {
        let mut s = catcher_init(&affine(1, 1), &[affine(1, 2)]).unwrap();
        let rep = s.step().unwrap();
        assert_eq!(rep.case, CaseLabel::C1a);
        assert_eq!(s.graph().collect::<Vec<_>>(), vec![(&r(0, 1), &r(1, 1))]);
        assert_eq!(s.phi(&r(0, 1)), Some(&[0usize][..]));
        // r_1 = 0 is not yet an image, so the image step does real work.
        let rep = s.step().unwrap();
        assert_ne!(rep.case, CaseLabel::Skip);
        assert!(s.graph().any(|(_, q)| q.is_zero()));
        assert_eq!(s.step().unwrap().case, CaseLabel::Skip);
        assert!(check_invariants(&s).is_empty());
    }

    #[test]
    fn hand_built_violations() {
        let f = gold();
        let s = CatcherState::from_parts(&f, &[affine(1, 2)], 0, vec![(r(0, 1), r(1, 1), vec![1])]);
        assert!(check_invariants(&s).iter().any(|v| v.condition == "viii"));

        let h1 = PMAut::affine(Rational::from(2), r(-1, 2));
        let h2 = PMAut::affine(r(1, 2), r(1, 4));
        let s = CatcherState::from_parts(
            &f,
            &[h1, h2],
            0,
            vec![(r(0, 1), r(0, 1), vec![1, 0]), (r(1, 1), r(1, 1), vec![0, 1])],
        );
        assert!(check_invariants(&s).iter().any(|v| v.condition == "vi"));
    }

    #[test]
    fn extract_examples() {
        let f = affine(1, 1);
        let s = CatcherState::from_parts(&f, &[f.clone()], 0, vec![(r(0, 1), r(1, 1), vec![0])]);
        assert_eq!(extract_g(&s).unwrap(), affine(1, 1));
        let s = CatcherState::from_parts(
            &f,
            &[f.clone()],
            0,
            vec![(r(0, 1), r(1, 1), vec![0]), (r(2, 1), r(5, 1), vec![0])],
        );
        let g = extract_g(&s).unwrap();
        assert_eq!(g.piece_count(), 3);
        assert_eq!(g.eval(&r(1, 1)), r(3, 1));
        assert_eq!(g.eval(&r(3, 1)), r(6, 1));
        assert_eq!(g.eval(&r(-1, 1)), r(0, 1));
        let empty = CatcherState::from_parts(&f, &[f.clone()], 0, vec![]);
        assert_eq!(extract_g(&empty).unwrap_err(), CatchError::EmptyH);
    }

    fn suite_ok(f: &PMAut, ks: &[PMAut], stages: u64) -> CatchReport {
        let (g, rep) = run_catch(f, ks, stages).unwrap();
        let want = signature(f);
        for m in &rep.members {
            assert!(m.consistent, "{m:?}");
            assert_eq!(m.hull_signature, want, "member {}", m.index);
            assert!(m.stabilized);
        }
        assert!(g.piece_count() > 1);
        rep
    }

    #[test]
    fn translation_suites() {
        suite_ok(&affine(1, 1), &[affine(1, 2)], 12);
        suite_ok(&affine(1, 1), &[affine(1, 2), affine(2, 1)], 12);
    }

    #[test]
    fn gold_suite() {
        let rep = suite_ok(&gold(), &[affine(1, 2), affine(1, 3), affine(2, 1)], 12);
        assert_eq!(rep.target_signature.to_string(), "+ . -");
    }

    #[test]
    fn negative_target() {
        suite_ok(&affine(1, -1), &[affine(1, 2), affine(3, 0)], 10);
    }

    /// `- . + . - . +`: fixed points `±√2` and `6 ± √2`, all irrational.
    fn four_orbitals() -> PMAut {
        let m1 = Mobius::from_rationals(&r(3, 1), &r(2, 1), &r(1, 1), &r(3, 1)).unwrap();
        let shift = Mobius::translation(&r(6, 1));
        let n = shift.compose(&m1.inverse()).compose(&shift.inverse());
        let mid = Mobius::affine(&r(21, 20), &(r(8, 5) - r(21, 10)));
        PMAut::from_pieces(
            vec![r(-2, 1), r(2, 1), r(5, 1), r(8, 1)],
            vec![
                Mobius::translation(&r(-2, 1)),
                m1,
                mid,
                n,
                Mobius::translation(&r(2, 1)),
            ],
        )
        .unwrap()
    }

    fn step_clean(s: &mut CatcherState, want: CaseLabel) {
        let rep = s.step().unwrap();
        assert_eq!(rep.case, want, "{rep:?}");
        let v: Vec<_> = check_invariants(s).into_iter().filter(|v| v.condition != "v").collect();
        assert!(v.is_empty(), "{v:?}");
    }

    #[test]
    fn four_orbital_target() {
        assert_eq!(signature(&four_orbitals()).to_string(), "- . + . - . +");
    }

    #[test]
    fn interior_target_after_negative_neighbour() {
        let f = four_orbitals();
        let ks = [PMAut::identity(), affine(2, -1)];
        let mut s = CatcherState::from_parts(
            &f,
            &ks,
            5,
            vec![(r(0, 1), r(1, 1), vec![0, 0]), (r(2, 1), r(3, 2), vec![3, 3])],
        );
        step_clean(&mut s, CaseLabel::C3c);
        for h in 0..2 {
            let mut img: Vec<usize> = s.phi.values().map(|row| row[h]).collect();
            img.dedup();
            assert_eq!(img, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn interior_target_after_positive_neighbour() {
        let f = four_orbitals().invert();
        assert_eq!(signature(&f).to_string(), "+ . - . + . -");
        let ks = [PMAut::identity(), PMAut::affine(r(1, 2), r(1, 4))];
        let mut s = CatcherState::from_parts(
            &f,
            &ks,
            8,
            vec![(r(0, 1), r(-1, 1), vec![0, 0]), (r(2, 1), r(3, 1), vec![3, 3])],
        );
        step_clean(&mut s, CaseLabel::C3d);
        for h in 0..2 {
            let mut img: Vec<usize> = s.phi.values().map(|row| row[h]).collect();
            img.dedup();
            assert_eq!(img, vec![0, 1, 2, 3]);
        }
    }

    #[test]
    fn end_targets_on_both_sides() {
        let f = four_orbitals();
        let ks = [PMAut::identity(), affine(2, -1)];
        // Image {1}, target 3 above it with a positive neighbour.
        let mut s = CatcherState::from_parts(&f, &ks, 11, vec![(r(0, 1), r(-2, 1), vec![1, 1])]);
        step_clean(&mut s, CaseLabel::C3b);
        // Image {3}, target 1 below it with a positive neighbour.
        let mut s = CatcherState::from_parts(&f, &ks, 5, vec![(r(0, 1), r(-2, 1), vec![3, 3])]);
        step_clean(&mut s, CaseLabel::C3b);
        // Image {2}, target 1 below it with a negative neighbour.
        let mut s = CatcherState::from_parts(&f, &ks, 5, vec![(r(0, 1), r(2, 1), vec![2, 2])]);
        step_clean(&mut s, CaseLabel::C3a);
        // Image {1}, target 0 of parity −1: handled in the mirror.
        let mut s = CatcherState::from_parts(&f, &ks, 2, vec![(r(0, 1), r(-2, 1), vec![1, 1])]);
        step_clean(&mut s, CaseLabel::C3a);
    }

    #[test]
    fn four_orbital_run() {
        let f = four_orbitals();
        let rep = suite_ok(&f, &[affine(1, 2), affine(2, 1), PMAut::identity()], 12);
        assert_eq!(rep.target_signature.to_string(), "- . + . - . +");
    }

    #[test]
    fn point_inside_a_downward_crossing() {
        let ks = [PMAut::affine(r(1, 2), r(1, 1))];
        let mut s = CatcherState::from_parts(
            &gold(),
            &ks,
            3,
            vec![(r(0, 1), r(0, 1), vec![0]), (r(2, 1), r(3, 1), vec![1])],
        );
        step_clean(&mut s, CaseLabel::C1e);
        assert_eq!(s.phi(&r(1, 1)), Some(&[1usize][..]));
    }
}
