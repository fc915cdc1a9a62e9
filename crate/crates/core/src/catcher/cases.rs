//! The sub-cases of one construction step, written for a single frame of
//! reference. Mirror-image sub-cases are obtained by running these on the
//! reflected frame (see `Frame::reflected`).

use std::collections::BTreeMap;

use crate::exactnum::{rational_between, Rational};
use crate::pmaut::PMAut;

use super::{CaseLabel, CatchError};

/// A view of the construction state: `g` on `H`, its inverse, and `φ`.
pub(super) struct Frame<'a> {
    pub ks: &'a [PMAut],
    pub ks_inv: &'a [PMAut],
    pub parity: &'a [i8],
    pub g: BTreeMap<Rational, Rational>,
    pub g_inv: BTreeMap<Rational, Rational>,
    pub phi: BTreeMap<Rational, Vec<usize>>,
    pub choices: Vec<String>,
}

/// A new point of `H` with its `g` value and `φ(·, h)` for every `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Addition {
    pub p: Rational,
    pub q: Rational,
    pub phi: Vec<usize>,
}

type Outcome = Result<(CaseLabel, Vec<Addition>), CatchError>;

fn max_of(base: Rational, vals: impl IntoIterator<Item = Rational>) -> Rational {
    vals.into_iter().fold(base, |a, b| if b > a { b } else { a })
}

fn min_of(base: Rational, vals: impl IntoIterator<Item = Rational>) -> Rational {
    vals.into_iter().fold(base, |a, b| if b < a { b } else { a })
}

impl Frame<'_> {
    fn nk(&self) -> usize {
        self.ks.len()
    }

    fn h(&self, i: usize, x: &Rational) -> Rational {
        self.ks[i].eval(x)
    }

    fn hinv(&self, i: usize, y: &Rational) -> Rational {
        self.ks_inv[i].eval(y)
    }

    fn images(&self, x: &Rational) -> Vec<Rational> {
        (0..self.nk()).map(|i| self.h(i, x)).collect()
    }

    fn preimages(&self, y: &Rational) -> Vec<Rational> {
        (0..self.nk()).map(|i| self.hinv(i, y)).collect()
    }

    /// Choice rule: the simplest dyadic strictly inside `(lo, hi)`.
    fn between(&mut self, lo: &Rational, hi: &Rational) -> Result<Rational, CatchError> {
        let v = rational_between(lo, hi).map_err(|_| CatchError::InvariantBroken {
            condition: "choice".into(),
            witness: format!("empty interval ({lo}, {hi})"),
        })?;
        self.choices.push(format!("between({lo}, {hi}) = {v}"));
        Ok(v)
    }

    /// Choice rule: one more than the largest value.
    fn above(&mut self, vals: Vec<Rational>) -> Rational {
        let m = vals.iter().max().expect("non-empty").clone();
        let v = &m + Rational::one();
        self.choices.push(format!("above({m}) = {v}"));
        v
    }

    /// Choice rule: one less than the smallest value.
    fn below(&mut self, vals: Vec<Rational>) -> Rational {
        let m = vals.iter().min().expect("non-empty").clone();
        let v = &m - Rational::one();
        self.choices.push(format!("below({m}) = {v}"));
        v
    }

    fn gv(&self, p: &Rational) -> Rational {
        self.g[p].clone()
    }

    /// Whether `h_i` lies above `g` at `p'` and below it at `p''`.
    fn down_crossing(&self, i: usize, p1: &Rational, p2: &Rational) -> bool {
        self.h(i, p1) > self.gv(p1) && self.h(i, p2) < self.gv(p2)
    }

    fn up_crossing(&self, i: usize, p1: &Rational, p2: &Rational) -> bool {
        self.h(i, p1) < self.gv(p1) && self.h(i, p2) > self.gv(p2)
    }

    /// Case 1a: `H` is empty.
    pub fn case_1a(&mut self, x: &Rational, first: usize) -> Outcome {
        let q = if self.parity[first] > 0 {
            self.below(self.images(x))
        } else {
            self.above(self.images(x))
        };
        let phi = vec![first; self.nk()];
        Ok((CaseLabel::C1a, vec![Addition { p: x.clone(), q, phi }]))
    }

    /// Case 1b: `x` lies above every point of `H`.
    pub fn case_1b(&mut self, x: &Rational) -> Outcome {
        let (p1, q1) = self.g.last_key_value().map(|(a, b)| (a.clone(), b.clone())).unwrap();
        let o = self.phi[&p1][0];
        let phi = vec![o; self.nk()];
        if self.parity[o] > 0 {
            let hi = min_of(self.h(0, &p1), self.images(&p1));
            let t = self.between(&q1, &hi)?;
            return Ok((CaseLabel::C1b, vec![Addition { p: x.clone(), q: t, phi }]));
        }
        let mut vals = self.images(x);
        vals.push(q1.clone());
        let t = self.above(vals);
        let lo = max_of(q1.clone(), self.images(x));
        let q = self.between(&lo, &t)?;
        let hi = min_of(x.clone(), self.preimages(&q1));
        let p = self.between(&p1, &hi)?;
        Ok((
            CaseLabel::C1b,
            vec![
                Addition { p: x.clone(), q: t, phi: phi.clone() },
                Addition { p, q, phi },
            ],
        ))
    }

    /// Cases 1d and 1e: `x` lies between neighbours `p' < p''` of `H`.
    pub fn case_1de(&mut self, x: &Rational, p1: &Rational, p2: &Rational) -> Outcome {
        let (q1, q2) = (self.gv(p1), self.gv(p2));
        let (phi1, phi2) = (self.phi[p1].clone(), self.phi[p2].clone());
        let n = self.nk();
        let any_down = (0..n).any(|i| self.down_crossing(i, p1, p2));
        if !any_down {
            // 1d: K' are the functions crossing g upward.
            let kp: Vec<usize> = (0..n).filter(|&i| self.up_crossing(i, p1, p2)).collect();
            let low: Vec<Rational> =
                kp.iter().map(|&i| self.h(i, x)).filter(|v| *v < q2).collect();
            let lo = max_of(q1.clone(), low);
            let t = self.between(&lo, &q2)?;
            let q = self.between(&lo, &t)?;
            let hi = min_of(x.clone(), kp.iter().map(|&i| self.hinv(i, &q1)));
            let p = self.between(p1, &hi)?;
            let mut phi_x = phi1.clone();
            for &i in &kp {
                if self.h(i, x) > t {
                    phi_x[i] = phi2[i];
                }
            }
            return Ok((
                CaseLabel::C1d,
                vec![
                    Addition { p, q, phi: phi1 },
                    Addition { p: x.clone(), q: t, phi: phi_x },
                ],
            ));
        }
        // 1e: K' are the functions crossing g downward.
        let kp: Vec<usize> = (0..n).filter(|&i| self.down_crossing(i, p1, p2)).collect();
        let lo = max_of(q1, kp.iter().map(|&i| self.h(i, p2)));
        let t = self.between(&lo, &q2)?;
        Ok((CaseLabel::C1e, vec![Addition { p: x.clone(), q: t, phi: phi2 }]))
    }

    /// Case 2a: `y` lies above every value of `g`.
    pub fn case_2a(&mut self, y: &Rational) -> Outcome {
        let (q1, p1) = self.g_inv.last_key_value().map(|(a, b)| (a.clone(), b.clone())).unwrap();
        let o = self.phi[&p1][0];
        let phi = vec![o; self.nk()];
        if self.parity[o] > 0 {
            let mut vals = self.preimages(y);
            vals.push(p1.clone());
            let r = self.above(vals);
            let hi = min_of(y.clone(), self.images(&p1));
            let q = self.between(&q1, &hi)?;
            let lo = max_of(p1.clone(), self.preimages(y));
            let p = self.between(&lo, &r)?;
            return Ok((
                CaseLabel::C2a,
                vec![
                    Addition { p, q, phi: phi.clone() },
                    Addition { p: r, q: y.clone(), phi },
                ],
            ));
        }
        let hi = min_of(self.hinv(0, &q1), self.preimages(&q1));
        let r = self.between(&p1, &hi)?;
        Ok((CaseLabel::C2a, vec![Addition { p: r, q: y.clone(), phi }]))
    }

    /// Cases 2c and 2d: `y` lies between neighbouring values `q' < q''`.
    pub fn case_2cd(&mut self, y: &Rational, q1: &Rational, q2: &Rational) -> Outcome {
        let p1 = self.g_inv[q1].clone();
        let p2 = self.g_inv[q2].clone();
        let (phi1, phi2) = (self.phi[&p1].clone(), self.phi[&p2].clone());
        let n = self.nk();
        let any_down = (0..n).any(|i| self.down_crossing(i, &p1, &p2));
        if !any_down {
            // 2c: K' are the functions crossing g upward.
            let kp: Vec<usize> = (0..n).filter(|&i| self.up_crossing(i, &p1, &p2)).collect();
            let hi = min_of(p2.clone(), kp.iter().map(|&i| self.hinv(i, q1)));
            let r = self.between(&p1, &hi)?;
            return Ok((CaseLabel::C2c, vec![Addition { p: r, q: y.clone(), phi: phi1 }]));
        }
        // 2d: K' are the functions crossing g downward.
        let kp: Vec<usize> = (0..n).filter(|&i| self.down_crossing(i, &p1, &p2)).collect();
        let s: Vec<Rational> = kp.iter().map(|&i| self.hinv(i, y)).filter(|v| *v > p1).collect();
        let hi = min_of(p2.clone(), s.iter().cloned());
        let r = self.between(&p1, &hi)?;
        let lo = max_of(y.clone(), kp.iter().map(|&i| self.h(i, &p2)));
        let q = self.between(&lo, q2)?;
        let p = self.between(&r, &hi)?;
        let mut phi_r = phi1.clone();
        let mut phi_p = phi1.clone();
        for &i in &kp {
            phi_p[i] = phi2[i];
            if self.hinv(i, y) > p1 {
                phi_r[i] = phi2[i];
            }
        }
        Ok((
            CaseLabel::C2d,
            vec![
                Addition { p: r, q: y.clone(), phi: phi_r },
                Addition { p, q, phi: phi_p },
            ],
        ))
    }

    /// Case 3 for a target orbital of parity `+1` missing from the image.
    pub fn case_3(&mut self, target: usize) -> Outcome {
        let image: Vec<usize> = {
            let mut v: Vec<usize> = self.phi.values().map(|row| row[0]).collect();
            v.sort();
            v.dedup();
            v
        };
        let n = self.nk();
        if image.iter().all(|&o| o < target) {
            let (p, q) = self.g.last_key_value().map(|(a, b)| (a.clone(), b.clone())).unwrap();
            let o = self.phi[&p][0];
            if self.parity[o] < 0 {
                let t = self.above(vec![q]);
                let mut vals = self.preimages(&t);
                vals.push(p);
                let r = self.above(vals);
                return Ok((CaseLabel::C3a, vec![Addition { p: r, q: t, phi: vec![target; n] }]));
            }
            let mid = target - 1;
            let r1 = self.above(vec![p]);
            let mut vals = self.images(&r1);
            vals.push(q);
            let t1 = self.above(vals);
            let t2 = self.above(vec![t1.clone()]);
            let mut vals = self.preimages(&t2);
            vals.push(r1.clone());
            let r2 = self.above(vals);
            return Ok((
                CaseLabel::C3b,
                vec![
                    Addition { p: r1, q: t1, phi: vec![mid; n] },
                    Addition { p: r2, q: t2, phi: vec![target; n] },
                ],
            ));
        }
        if image.iter().all(|&o| o > target) {
            let (p, q) = self.g.first_key_value().map(|(a, b)| (a.clone(), b.clone())).unwrap();
            let o = self.phi[&p][0];
            if self.parity[o] < 0 {
                let r = self.below(vec![p]);
                let mut vals = self.images(&r);
                vals.push(q);
                let t = self.below(vals);
                return Ok((CaseLabel::C3a, vec![Addition { p: r, q: t, phi: vec![target; n] }]));
            }
            let mid = target + 1;
            let t1 = self.below(vec![q]);
            let mut vals = self.preimages(&t1);
            vals.push(p);
            let r1 = self.below(vals);
            let r2 = self.below(vec![r1.clone()]);
            let mut vals = self.images(&r2);
            vals.push(t1.clone());
            let t2 = self.below(vals);
            return Ok((
                CaseLabel::C3b,
                vec![
                    Addition { p: r2, q: t2, phi: vec![target; n] },
                    Addition { p: r1, q: t1, phi: vec![mid; n] },
                ],
            ));
        }
        let o1 = *image.iter().filter(|&&o| o < target).max().unwrap();
        let o2 = *image.iter().filter(|&&o| o > target).min().unwrap();
        let keys: Vec<Rational> = self.g.keys().cloned().collect();
        let mut additions = Vec::new();
        let label = if self.parity[o1] < 0 { CaseLabel::C3c } else { CaseLabel::C3d };
        for w in keys.windows(2) {
            let (p1, p2) = (&w[0], &w[1]);
            let kp: Vec<usize> = (0..n)
                .filter(|&i| self.phi[p1][i] == o1 && self.phi[p2][i] == o2)
                .collect();
            if kp.is_empty() {
                continue;
            }
            let add = if label == CaseLabel::C3c {
                self.case_3c_pair(p1, p2, &kp, target, o1, o2)?
            } else {
                self.case_3d_pair(p1, p2, &kp, target, o1, o2)?
            };
            additions.extend(add);
        }
        Ok((label, additions))
    }

    /// Case 3c on one neighbouring pair: `s(O') = −1`, `s(O'') = +1`.
    fn case_3c_pair(
        &mut self,
        p1: &Rational,
        p2: &Rational,
        kp: &[usize],
        target: usize,
        o1: usize,
        o2: usize,
    ) -> Result<Vec<Addition>, CatchError> {
        let n = self.nk();
        let o = target + 1;
        let (q1, q2) = (self.gv(p1), self.gv(p2));
        let base = self.phi[p1].clone();
        let q = self.between(&q1, &q2)?;
        // Distinct preimages r^1 < … < r^c of q, with the members hitting each.
        let mut rs: Vec<Rational> = kp.iter().map(|&i| self.hinv(i, &q)).collect();
        rs.sort();
        rs.dedup();
        let class = |fr: &Self, i: usize| rs.iter().position(|r| *r == fr.hinv(i, &q)).unwrap();
        let below_q: Vec<Rational> = rs
            .iter()
            .flat_map(|r| kp.iter().map(move |&i| (i, r)))
            .map(|(i, r)| self.h(i, r))
            .filter(|v| *v < q)
            .collect();
        let lo = max_of(q1.clone(), below_q);
        let t = self.between(&lo, &q)?;
        let hi = min_of(p2.clone(), kp.iter().map(|&i| self.hinv(i, &q1)));
        let r = self.between(p1, &hi)?;

        let mut out = Vec::new();
        let mut row_r = base.clone();
        for &i in kp {
            row_r[i] = o1;
        }
        out.push(Addition { p: r.clone(), q: t.clone(), phi: row_r });

        let (mut prev_r, mut prev_t) = (r, t);
        for (j, rj) in rs.iter().enumerate() {
            let members: Vec<usize> = kp.iter().copied().filter(|&i| class(self, i) == j).collect();
            let t1 = self.between(&prev_t, &q)?;
            let lo = max_of(prev_r.clone(), members.iter().map(|&i| self.hinv(i, &t1)));
            let r1 = self.between(&lo, rj)?;
            let r2 = self.between(&r1, rj)?;
            let lo = max_of(t1.clone(), members.iter().map(|&i| self.h(i, &r2)));
            let t2 = self.between(&lo, &q)?;
            let r3 = rj.clone();
            let t3 = self.between(&t2, &q)?;
            let points = [(r1, t1), (r2, t2), (r3, t3)];
            for (l, (pt, val)) in points.iter().enumerate() {
                let mut row = base.clone();
                for &i in kp {
                    let cj = class(self, i);
                    row[i] = if cj > j {
                        o1
                    } else if cj < j {
                        o2
                    } else {
                        [target, o, o2][l]
                    };
                }
                out.push(Addition { p: pt.clone(), q: val.clone(), phi: row });
            }
            prev_r = points[2].0.clone();
            prev_t = points[2].1.clone();
        }
        let lo = max_of(prev_r, kp.iter().map(|&i| self.hinv(i, &q2)));
        let p = self.between(&lo, p2)?;
        let mut row_p = base;
        for &i in kp {
            row_p[i] = o2;
        }
        out.push(Addition { p, q, phi: row_p });
        debug_assert!(out.iter().all(|a| a.phi.len() == n));
        Ok(out)
    }

    /// Case 3d on one neighbouring pair: `s(O') = +1`, `s(O'') = −1`.
    fn case_3d_pair(
        &mut self,
        p1: &Rational,
        p2: &Rational,
        kp: &[usize],
        target: usize,
        o1: usize,
        o2: usize,
    ) -> Result<Vec<Addition>, CatchError> {
        let o = target - 1;
        let (q1, q2) = (self.gv(p1), self.gv(p2));
        let base = self.phi[p1].clone();
        let p = self.between(p1, p2)?;
        let mut ts: Vec<Rational> = kp.iter().map(|&i| self.h(i, &p)).collect();
        ts.sort();
        ts.dedup();
        let class = |fr: &Self, i: usize| ts.iter().position(|t| *t == fr.h(i, &p)).unwrap();
        let early: Vec<Rational> = ts
            .iter()
            .flat_map(|t| kp.iter().map(move |&i| (i, t)))
            .map(|(i, t)| self.hinv(i, t))
            .filter(|v| *v < p)
            .collect();
        let lo = max_of(p1.clone(), early);
        let r = self.between(&lo, &p)?;
        let hi = min_of(ts[0].clone(), kp.iter().map(|&i| self.h(i, p1)));
        let t = self.between(&q1, &hi)?;

        let mut out = Vec::new();
        let mut row_r = base.clone();
        for &i in kp {
            row_r[i] = o1;
        }
        out.push(Addition { p: r.clone(), q: t.clone(), phi: row_r });

        let (mut prev_r, mut prev_t) = (r, t);
        for (j, tj) in ts.iter().enumerate() {
            let members: Vec<usize> = kp.iter().copied().filter(|&i| class(self, i) == j).collect();
            let r1 = self.between(&prev_r, &p)?;
            let lo = max_of(prev_t.clone(), members.iter().map(|&i| self.h(i, &r1)));
            let t1 = self.between(&lo, tj)?;
            let t2 = self.between(&t1, tj)?;
            let lo = max_of(r1.clone(), members.iter().map(|&i| self.hinv(i, &t2)));
            let r2 = self.between(&lo, &p)?;
            let r3 = self.between(&r2, &p)?;
            let t3 = tj.clone();
            let points = [(r1, t1), (r2, t2), (r3, t3)];
            for (l, (pt, val)) in points.iter().enumerate() {
                let mut row = base.clone();
                for &i in kp {
                    let cj = class(self, i);
                    row[i] = if cj > j {
                        o1
                    } else if cj < j {
                        o2
                    } else {
                        [o, target, o2][l]
                    };
                }
                out.push(Addition { p: pt.clone(), q: val.clone(), phi: row });
            }
            prev_r = points[2].0.clone();
            prev_t = points[2].1.clone();
        }
        let lo = max_of(prev_t, kp.iter().map(|&i| self.h(i, p2)));
        let q = self.between(&lo, &q2)?;
        let mut row_p = base;
        for &i in kp {
            row_p[i] = o2;
        }
        out.push(Addition { p, q, phi: row_p });
        Ok(out)
    }
}
