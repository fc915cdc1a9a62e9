use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{NumError, Rational};

/// Trial-division bound used when stripping square factors from large radicands.
const SQUAREFREE_TRIAL_LIMIT: u64 = 20_000;

/// An exact number `p + q·√D` with `D` a non-negative integer.
///
/// Canonical form strips square factors from `D` (fully for radicands below
/// 2^64, by bounded trial division above that), folds perfect squares into
/// `p`, and sets `D = 0` whenever `q = 0`. Ordering and equality are by value,
/// so a radicand that still carries a large square factor compares correctly.
#[derive(Clone)]
pub struct QuadPoint {
    p: Rational,
    q: Rational,
    d: BigInt,
}

impl QuadPoint {
    pub fn new(p: Rational, q: Rational, d: impl Into<BigInt>) -> Self {
        let d = d.into();
        assert!(!d.is_negative(), "negative radicand");
        if q.is_zero() || d.is_zero() {
            return QuadPoint::rational(p);
        }
        let (s, t) = squarefree_split(&d);
        let q = q * Rational::from_integer(s);
        if t.is_one() {
            return QuadPoint::rational(p + q);
        }
        QuadPoint { p, q, d: t }
    }

    pub fn rational(p: Rational) -> Self {
        QuadPoint {
            p,
            q: Rational::zero(),
            d: BigInt::zero(),
        }
    }

    /// `√n` for a non-negative integer `n`.
    pub fn sqrt(n: i64) -> Self {
        QuadPoint::new(Rational::zero(), Rational::one(), n)
    }

    pub fn p(&self) -> &Rational {
        &self.p
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn radicand(&self) -> &BigInt {
        &self.d
    }

    pub fn is_rational(&self) -> bool {
        self.q.is_zero()
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        self.is_rational().then_some(&self.p)
    }

    pub fn neg(&self) -> Self {
        QuadPoint {
            p: -&self.p,
            q: -&self.q,
            d: self.d.clone(),
        }
    }

    pub fn add_rational(&self, r: &Rational) -> Self {
        QuadPoint {
            p: &self.p + r,
            q: self.q.clone(),
            d: self.d.clone(),
        }
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return QuadPoint::rational(Rational::zero());
        }
        QuadPoint {
            p: &self.p * r,
            q: &self.q * r,
            d: self.d.clone(),
        }
    }

    /// Sign of the value: -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        sign_single(&self.p, &self.q, &self.d)
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> BigInt {
        if self.is_rational() {
            return self.p.floor();
        }
        // i <= |q|·√D < i + 1, computed as isqrt(floor(q²D)).
        let radicand = &self.q * &self.q * Rational::from_integer(self.d.clone());
        let i = Rational::from_integer(radicand.floor().sqrt());
        let lower = if self.q.signum() > 0 {
            &self.p + &i
        } else {
            &self.p - &i - Rational::one()
        };
        let candidate = lower.floor() + BigInt::one();
        if quad_cmp(&QuadPoint::rational(Rational::from_integer(candidate.clone())), self)
            != Ordering::Greater
        {
            candidate
        } else {
            candidate - BigInt::one()
        }
    }

    pub fn ceil(&self) -> BigInt {
        -self.neg().floor()
    }

    pub fn to_f64(&self) -> f64 {
        let d = self.d.to_f64().unwrap_or(f64::NAN);
        self.p.to_f64() + self.q.to_f64() * d.sqrt()
    }
}

impl From<Rational> for QuadPoint {
    fn from(r: Rational) -> Self {
        QuadPoint::rational(r)
    }
}

impl From<&Rational> for QuadPoint {
    fn from(r: &Rational) -> Self {
        QuadPoint::rational(r.clone())
    }
}

/// Splits `n = s²·t` with `t` square-free (best effort above 2^64).
fn squarefree_split(n: &BigInt) -> (BigInt, BigInt) {
    let root = n.sqrt();
    if &(&root * &root) == n {
        return (root, BigInt::one());
    }
    if let Some(mut rest) = n.to_u64() {
        let mut s: u64 = 1;
        let mut free: u64 = 1;
        let mut i: u64 = 2;
        // Once i³ exceeds what remains, the remainder is 1, a prime, a
        // product of two distinct primes, or a prime square.
        while i.saturating_mul(i).saturating_mul(i) <= rest {
            if rest % i == 0 {
                let mut e = 0;
                while rest % i == 0 {
                    rest /= i;
                    e += 1;
                }
                s *= i.pow(e / 2);
                if e % 2 == 1 {
                    free *= i;
                }
            }
            i += 1;
        }
        let r = BigInt::from(rest).sqrt();
        if &r * &r == BigInt::from(rest) {
            return (BigInt::from(s) * r, BigInt::from(free));
        }
        return (BigInt::from(s), BigInt::from(free) * BigInt::from(rest));
    }
    let mut t = n.clone();
    let mut s = BigInt::one();
    for i in 2..SQUAREFREE_TRIAL_LIMIT {
        let sq = BigInt::from(i * i);
        while (&t % &sq).is_zero() {
            t /= &sq;
            s *= i;
        }
    }
    let root = t.sqrt();
    if &root * &root == t {
        return (s * root, BigInt::one());
    }
    (s, t)
}

/// Sign of `x + y·√d`, by the squaring rule with sign bookkeeping.
fn sign_single(x: &Rational, y: &Rational, d: &BigInt) -> i8 {
    let sx = x.signum();
    let sy = if d.is_zero() { 0 } else { y.signum() };
    if sy == 0 {
        return sx;
    }
    if sx == 0 || sx == sy {
        return sy;
    }
    // Opposite signs: compare x² with y²·d.
    let lhs = x * x;
    let rhs = y * y * Rational::from_integer(d.clone());
    match lhs.cmp(&rhs) {
        Ordering::Greater => sx,
        Ordering::Less => sy,
        Ordering::Equal => 0,
    }
}

fn ordering_of(sign: i8) -> Ordering {
    sign.cmp(&0)
}

/// Exact comparison of two quadratic numbers.
///
/// Same radicand reduces to one sign test. Distinct radicands compare
/// `A + B√D₁` with `C√D₂`; when both sides share a sign, squaring leaves the
/// single-radical quantity `(A² + B²D₁ − C²D₂) + 2AB√D₁`.
pub fn quad_cmp(a: &QuadPoint, b: &QuadPoint) -> Ordering {
    let diff_p = &a.p - &b.p;
    if b.is_rational() {
        return ordering_of(sign_single(&diff_p, &a.q, &a.d));
    }
    if a.is_rational() {
        return ordering_of(sign_single(&diff_p, &(-&b.q), &b.d));
    }
    if a.d == b.d {
        return ordering_of(sign_single(&diff_p, &(&a.q - &b.q), &a.d));
    }
    let left = sign_single(&diff_p, &a.q, &a.d);
    let right = b.q.signum();
    if left != right || left == 0 {
        return left.cmp(&right);
    }
    let d1 = Rational::from_integer(a.d.clone());
    let d2 = Rational::from_integer(b.d.clone());
    let rational_part = &diff_p * &diff_p + &a.q * &a.q * &d1 - &b.q * &b.q * &d2;
    let radical_part = Rational::from(2) * &diff_p * &a.q;
    let squared = sign_single(&rational_part, &radical_part, &a.d);
    ordering_of(left * squared)
}

impl PartialEq for QuadPoint {
    fn eq(&self, other: &Self) -> bool {
        quad_cmp(self, other) == Ordering::Equal
    }
}

impl Eq for QuadPoint {}

impl PartialOrd for QuadPoint {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for QuadPoint {
    fn cmp(&self, other: &Self) -> Ordering {
        quad_cmp(self, other)
    }
}

impl fmt::Display for QuadPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            return write!(f, "{}", self.p);
        }
        if !self.p.is_zero() {
            write!(f, "{}", self.p)?;
            if self.q.signum() > 0 {
                write!(f, "+")?;
            }
        }
        if self.q == Rational::from(-1) {
            write!(f, "-")?;
        } else if self.q != Rational::one() {
            write!(f, "{}*", self.q)?;
        }
        write!(f, "sqrt({})", self.d)
    }
}

impl fmt::Debug for QuadPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for QuadPoint {
    type Err = NumError;

    /// Accepts a rational, or `[p±][q*]sqrt(D)[±p]`, e.g. `sqrt2-1`,
    /// `-1/2+1/2*sqrt(5)`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || NumError::Parse(format!("not a quadratic number: {s:?}"));
        let Some(idx) = s.find("sqrt") else {
            return Ok(QuadPoint::rational(s.parse()?));
        };
        let before = &s[..idx];
        let after = &s[idx + 4..];
        let (radicand, rest) = if let Some(inner) = after.strip_prefix('(') {
            let close = inner.find(')').ok_or_else(bad)?;
            (&inner[..close], &inner[close + 1..])
        } else {
            let end = after.find(|c: char| !c.is_ascii_digit()).unwrap_or(after.len());
            (&after[..end], &after[end..])
        };
        let d: BigInt = radicand.parse().map_err(|_| bad())?;
        if d.is_negative() {
            return Err(bad());
        }

        let (mut p, q) = if let Some(coef) = before.strip_suffix('*') {
            split_signed_tail(coef).ok_or_else(bad)?
        } else if before.is_empty() {
            (Rational::zero(), Rational::one())
        } else if let Some(head) = before.strip_suffix('+') {
            (parse_or_zero(head)?, Rational::one())
        } else if let Some(head) = before.strip_suffix('-') {
            (parse_or_zero(head)?, Rational::from(-1))
        } else {
            return Err(bad());
        };
        if !rest.is_empty() {
            let tail: Rational = rest.strip_prefix('+').unwrap_or(rest).parse()?;
            p = p + tail;
        }
        Ok(QuadPoint::new(p, q, d))
    }
}

fn parse_or_zero(s: &str) -> Result<Rational, NumError> {
    if s.is_empty() {
        Ok(Rational::zero())
    } else {
        s.parse()
    }
}

/// Splits `"p+q"` / `"p-q"` / `"q"` into `(p, q)` at the last interior sign.
fn split_signed_tail(s: &str) -> Option<(Rational, Rational)> {
    let pos = s
        .char_indices()
        .skip(1)
        .filter(|(_, c)| *c == '+' || *c == '-')
        .map(|(i, _)| i)
        .last();
    match pos {
        None => Some((Rational::zero(), s.parse().ok()?)),
        Some(i) => {
            let p = s[..i].parse().ok()?;
            let q = s[i..].strip_prefix('+').unwrap_or(&s[i..]).parse().ok()?;
            Some((p, q))
        }
    }
}

#[derive(Serialize, Deserialize)]
struct QuadDoc {
    p: Rational,
    q: Rational,
    #[serde(rename = "D")]
    d: serde_json::Value,
}

impl Serialize for QuadPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let d = match self.d.to_u64() {
            Some(n) => serde_json::Value::from(n),
            None => serde_json::Value::from(self.d.to_string()),
        };
        QuadDoc {
            p: self.p.clone(),
            q: self.q.clone(),
            d,
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for QuadPoint {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let doc = QuadDoc::deserialize(deserializer)?;
        let d: BigInt = match &doc.d {
            serde_json::Value::Number(n) => n
                .as_u64()
                .map(BigInt::from)
                .ok_or_else(|| D::Error::custom("radicand must be a non-negative integer"))?,
            serde_json::Value::String(s) => s.parse().map_err(D::Error::custom)?,
            _ => return Err(D::Error::custom("radicand must be an integer")),
        };
        if d.is_negative() {
            return Err(D::Error::custom("negative radicand"));
        }
        Ok(QuadPoint::new(doc.p, doc.q, d))
    }
}

/// A value extended by the two infinities. Variant order gives the real order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Ext<T> {
    NegInf,
    Finite(T),
    PosInf,
}

/// Orbital endpoints and similar: a quadratic number or an infinity.
pub type ExtendedPoint = Ext<QuadPoint>;

impl<T> Ext<T> {
    pub fn finite(&self) -> Option<&T> {
        match self {
            Ext::Finite(t) => Some(t),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Ext::Finite(_))
    }

    pub fn map<U>(&self, f: impl FnOnce(&T) -> U) -> Ext<U> {
        match self {
            Ext::NegInf => Ext::NegInf,
            Ext::Finite(t) => Ext::Finite(f(t)),
            Ext::PosInf => Ext::PosInf,
        }
    }
}

impl Ext<Rational> {
    pub fn to_point(&self) -> ExtendedPoint {
        self.map(|r| QuadPoint::from(r.clone()))
    }
}

impl<T: fmt::Display> fmt::Display for Ext<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ext::NegInf => write!(f, "-inf"),
            Ext::Finite(t) => write!(f, "{t}"),
            Ext::PosInf => write!(f, "+inf"),
        }
    }
}

impl<T: Serialize> Serialize for Ext<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Ext::NegInf => serializer.serialize_str("-inf"),
            Ext::PosInf => serializer.serialize_str("+inf"),
            Ext::Finite(t) => t.serialize(serializer),
        }
    }
}

impl<'de, T: serde::de::DeserializeOwned> Deserialize<'de> for Ext<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let value = serde_json::Value::deserialize(deserializer)?;
        match value.as_str() {
            Some("-inf") => Ok(Ext::NegInf),
            Some("+inf") | Some("inf") => Ok(Ext::PosInf),
            _ => serde_json::from_value(value)
                .map(Ext::Finite)
                .map_err(D::Error::custom),
        }
    }
}

/// The dyadic rational `m/2^k` with minimal `k` (then minimal `|m|`, then
/// positive `m`) lying strictly inside `(lo, hi)`.
pub fn dyadic_between(lo: &ExtendedPoint, hi: &ExtendedPoint) -> Result<Rational, NumError> {
    if lo >= hi {
        return Err(NumError::EmptyInterval {
            lo: lo.to_string(),
            hi: hi.to_string(),
        });
    }
    let mut k: u32 = 0;
    loop {
        let scale = Rational::dyadic(BigInt::one(), 0).shl(k);
        // Smallest integer > lo·2^k and largest integer < hi·2^k.
        let m_min = match lo {
            Ext::Finite(x) => Some(x.scale(&scale).floor() + BigInt::one()),
            _ => None,
        };
        let m_max = match hi {
            Ext::Finite(x) => Some(x.scale(&scale).ceil() - BigInt::one()),
            _ => None,
        };
        let feasible = match (&m_min, &m_max) {
            (Some(a), Some(b)) => a <= b,
            _ => true,
        };
        if feasible {
            let m = match (m_min, m_max) {
                (Some(a), _) if a.is_positive() => a,
                (_, Some(b)) if b.is_negative() => b,
                _ => BigInt::zero(),
            };
            return Ok(Rational::dyadic(m, k));
        }
        k += 1;
    }
}

/// `dyadic_between` on rational bounds.
pub fn rational_between(lo: &Rational, hi: &Rational) -> Result<Rational, NumError> {
    dyadic_between(&Ext::Finite(lo.into()), &Ext::Finite(hi.into()))
}
