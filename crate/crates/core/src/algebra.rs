//! Exact Laurent polynomials with half-integer exponents and 2x2 matrices over them.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("substitution value for {0} is not a monomial")]
    SubstituteNonMonomial(String),
    #[error("tropical evaluation of the zero polynomial")]
    ZeroPolynomial,
    #[error("matrix is not unimodular (det = {0})")]
    NotUnimodular(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}

/// Variable families. The declaration order is the global sort order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    /// Cluster variable of an arc.
    X,
    /// Specialized coefficient variable of a tagged arc.
    Y,
    /// Unspecialized coefficient attached to an arc of the ideal triangulation.
    CurlyY,
    /// Boundary segment.
    Boundary,
}

impl VarKind {
    pub fn prefix(self) -> &'static str {
        match self {
            VarKind::X => "x",
            VarKind::Y => "y",
            VarKind::CurlyY => "Y",
            VarKind::Boundary => "b",
        }
    }

    fn from_prefix(s: &str) -> Option<VarKind> {
        match s {
            "x" => Some(VarKind::X),
            "y" => Some(VarKind::Y),
            "Y" => Some(VarKind::CurlyY),
            "b" => Some(VarKind::Boundary),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    pub kind: VarKind,
    pub label: String,
}

impl VarId {
    pub fn new(kind: VarKind, label: impl Into<String>) -> Self {
        VarId { kind, label: label.into() }
    }
    pub fn x(label: impl Into<String>) -> Self {
        Self::new(VarKind::X, label)
    }
    pub fn y(label: impl Into<String>) -> Self {
        Self::new(VarKind::Y, label)
    }
    pub fn curly(label: impl Into<String>) -> Self {
        Self::new(VarKind::CurlyY, label)
    }
    pub fn boundary(label: impl Into<String>) -> Self {
        Self::new(VarKind::Boundary, label)
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.kind.prefix(), self.label)
    }
}

pub fn is_label_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '\'' | '@' | '~')
}

/// A Laurent monomial; exponents are stored doubled.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Monomial {
    exps: BTreeMap<VarId, i32>,
}

impl Monomial {
    pub fn one() -> Self {
        Monomial::default()
    }

    /// `v^(twice/2)`.
    pub fn var_half(v: VarId, twice: i32) -> Self {
        let mut m = Monomial::one();
        if twice != 0 {
            m.exps.insert(v, twice);
        }
        m
    }

    pub fn var(v: VarId) -> Self {
        Self::var_half(v, 2)
    }

    pub fn var_pow(v: VarId, k: i32) -> Self {
        Self::var_half(v, 2 * k)
    }

    pub fn from_doubled(it: impl IntoIterator<Item = (VarId, i32)>) -> Self {
        let mut m = Monomial::one();
        for (v, e) in it {
            m.mul_var(&v, e);
        }
        m
    }

    pub fn is_one(&self) -> bool {
        self.exps.is_empty()
    }

    /// Doubled exponent of `v`.
    pub fn doubled(&self, v: &VarId) -> i32 {
        self.exps.get(v).copied().unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, i32)> {
        self.exps.iter().map(|(v, e)| (v, *e))
    }

    pub fn vars(&self) -> impl Iterator<Item = &VarId> {
        self.exps.keys()
    }

    fn mul_var(&mut self, v: &VarId, e: i32) {
        if e == 0 {
            return;
        }
        let slot = self.exps.entry(v.clone()).or_insert(0);
        *slot += e;
        if *slot == 0 {
            self.exps.remove(v);
        }
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut out = self.clone();
        for (v, e) in &other.exps {
            out.mul_var(v, *e);
        }
        out
    }

    pub fn inverse(&self) -> Monomial {
        Monomial { exps: self.exps.iter().map(|(v, e)| (v.clone(), -e)).collect() }
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inverse())
    }

    pub fn pow(&self, k: i32) -> Monomial {
        if k == 0 {
            return Monomial::one();
        }
        Monomial { exps: self.exps.iter().map(|(v, e)| (v.clone(), e * k)).collect() }
    }

    /// Total doubled degree.
    pub fn degree(&self) -> i64 {
        self.exps.values().map(|&e| e as i64).sum()
    }

    /// True when every exponent is an integer.
    pub fn is_integral(&self) -> bool {
        self.exps.values().all(|e| e % 2 == 0)
    }

    /// True when no exponent is negative.
    pub fn is_polynomial(&self) -> bool {
        self.exps.values().all(|&e| e >= 0)
    }

    /// Drops every variable of the given kind.
    pub fn without_kind(&self, kind: VarKind) -> Monomial {
        Monomial { exps: self.exps.iter().filter(|(v, _)| v.kind != kind).map(|(v, e)| (v.clone(), *e)).collect() }
    }

    fn render(&self, out: &mut String) {
        let mut first = true;
        for (v, e) in &self.exps {
            if !first {
                out.push('*');
            }
            first = false;
            out.push_str(&v.to_string());
            if *e != 2 {
                if e % 2 == 0 {
                    out.push_str(&format!("^{}", e / 2));
                } else {
                    out.push_str(&format!("^({}/2)", e));
                }
            }
        }
    }
}

impl Ord for Monomial {
    /// Graded order: higher total degree first, then lexicographic on the
    /// variable-sorted exponent vector (larger exponent of the smallest variable first).
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| {
            let vars: BTreeSet<&VarId> = self.exps.keys().chain(other.exps.keys()).collect();
            for v in vars {
                let (a, b) = (self.doubled(v), other.doubled(v));
                if a != b {
                    return b.cmp(&a);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut s = String::new();
        self.render(&mut s);
        f.write_str(&s)
    }
}

/// Laurent polynomial with integer coefficients, always in canonical form.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    terms: BTreeMap<Monomial, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        Self::from_monomial(Monomial::one())
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::term(c, Monomial::one())
    }

    pub fn term(c: impl Into<BigInt>, m: Monomial) -> Self {
        let mut p = LaurentPoly::zero();
        p.add_term(m, c.into());
        p
    }

    pub fn from_monomial(m: Monomial) -> Self {
        Self::term(1, m)
    }

    pub fn var(v: VarId) -> Self {
        Self::from_monomial(Monomial::var(v))
    }

    pub fn x(label: &str) -> Self {
        Self::var(VarId::x(label))
    }

    pub fn y(label: &str) -> Self {
        Self::var(VarId::y(label))
    }

    pub fn curly(label: &str) -> Self {
        Self::var(VarId::curly(label))
    }

    pub fn boundary(label: &str) -> Self {
        Self::var(VarId::boundary(label))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in output order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// The unique monomial of a single-term polynomial with coefficient 1.
    pub fn as_monomial(&self) -> Option<&Monomial> {
        match self.terms.iter().next() {
            Some((m, c)) if self.terms.len() == 1 && c.is_one() => Some(m),
            _ => None,
        }
    }

    pub fn variables(&self) -> BTreeSet<VarId> {
        self.terms.keys().flat_map(|m| m.vars().cloned()).collect()
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
            Entry::Vacant(e) => {
                e.insert(c);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    /// Rebuilds the term map; a no-op on canonical input.
    pub fn normalize(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (m, c) in &self.terms {
            p.add_term(m.clone(), c.clone());
        }
        p
    }

    pub fn scale_monomial(&self, m: &Monomial) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(k, c)| (k.mul(m), c.clone())).collect() }
    }

    pub fn scale(&self, c: &BigInt) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (m, k) in &self.terms {
            p.add_term(m.clone(), k * c);
        }
        p
    }

    pub fn pow(&self, k: u32) -> LaurentPoly {
        let mut out = LaurentPoly::one();
        for _ in 0..k {
            out = &out * self;
        }
        out
    }

    /// Replaces each listed variable by a single-term value.
    pub fn substitute(&self, sub: &BTreeMap<VarId, LaurentPoly>) -> Result<LaurentPoly, AlgebraError> {
        let mut mono: BTreeMap<&VarId, (&Monomial, &BigInt)> = BTreeMap::new();
        for (v, val) in sub {
            if val.terms.len() != 1 {
                return Err(AlgebraError::SubstituteNonMonomial(v.to_string()));
            }
            let (m, c) = val.terms.iter().next().unwrap();
            mono.insert(v, (m, c));
        }
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut nm = Monomial::one();
            let mut nc = c.clone();
            for (v, e) in m.iter() {
                match mono.get(v) {
                    Some((vm, vc)) => {
                        if !vc.is_one() {
                            if e % 2 != 0 {
                                return Err(AlgebraError::SubstituteNonMonomial(v.to_string()));
                            }
                            let k = e / 2;
                            if k < 0 && !(vc.abs().is_one()) {
                                return Err(AlgebraError::SubstituteNonMonomial(v.to_string()));
                            }
                            nc *= num_traits::pow::pow((*vc).clone(), k.unsigned_abs() as usize);
                        }
                        if e % 2 != 0 && vm.iter().any(|(_, ve)| ve % 2 != 0) {
                            return Err(AlgebraError::SubstituteNonMonomial(v.to_string()));
                        }
                        let pm = if e % 2 == 0 {
                            vm.pow(e / 2)
                        } else {
                            Monomial { exps: vm.exps.iter().map(|(w, we)| (w.clone(), we / 2 * e)).collect() }
                        };
                        nm = nm.mul(&pm);
                    }
                    None => nm.mul_var(v, e),
                }
            }
            out.add_term(nm, nc);
        }
        Ok(out)
    }

    /// Sets every variable of the given kind to 1.
    pub fn specialize_kind(&self, kind: VarKind) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(m.without_kind(kind), c.clone());
        }
        out
    }

    /// Evaluation in the tropical semifield on `vars`: per-variable minimum exponent.
    pub fn tropical_eval(&self, vars: &BTreeSet<VarId>) -> Result<Monomial, AlgebraError> {
        if self.is_zero() {
            return Err(AlgebraError::ZeroPolynomial);
        }
        let mut out = Monomial::one();
        for v in vars {
            let min = self.terms.keys().map(|m| m.doubled(v)).min().unwrap_or(0);
            out.mul_var(v, min);
        }
        Ok(out)
    }

    /// Sign shared by all coefficients, or None if mixed or zero.
    pub fn uniform_sign(&self) -> Option<i8> {
        let pos = self.terms.values().all(|c| c.is_positive());
        let neg = self.terms.values().all(|c| c.is_negative());
        match (self.is_zero(), pos, neg) {
            (true, _, _) => None,
            (false, true, _) => Some(1),
            (false, _, true) => Some(-1),
            _ => None,
        }
    }

    pub fn all_coefficients_positive(&self) -> bool {
        self.terms.values().all(|c| c.is_positive())
    }

    /// Divides by a monomial exactly.
    pub fn div_monomial(&self, m: &Monomial) -> LaurentPoly {
        self.scale_monomial(&m.inverse())
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut s = String::new();
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    s.push('-');
                }
            } else {
                s.push_str(if neg { " - " } else { " + " });
            }
            let a = c.abs();
            if m.is_one() {
                s.push_str(&a.to_string());
            } else {
                if !a.is_one() {
                    s.push_str(&a.to_string());
                    s.push('*');
                }
                m.render(&mut s);
            }
        }
        f.write_str(&s)
    }
}

impl FromStr for LaurentPoly {
    type Err = AlgebraError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Parser { src: s.as_bytes(), pos: 0 }.poly()
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err<T>(&self, msg: &str) -> Result<T, AlgebraError> {
        Err(AlgebraError::Parse { pos: self.pos, msg: msg.to_string() })
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek() == Some(b' ') {
            self.pos += 1;
        }
    }

    fn poly(mut self) -> Result<LaurentPoly, AlgebraError> {
        let mut out = LaurentPoly::zero();
        self.skip_ws();
        let mut neg = false;
        if self.peek() == Some(b'-') {
            neg = true;
            self.pos += 1;
        }
        loop {
            self.skip_ws();
            let (c, m) = self.term()?;
            out.add_term(m, if neg { -c } else { c });
            self.skip_ws();
            match self.peek() {
                None => break,
                Some(b'+') => neg = false,
                Some(b'-') => neg = true,
                Some(_) => return self.err("expected '+' or '-'"),
            }
            self.pos += 1;
        }
        Ok(out)
    }

    fn integer(&mut self) -> Result<i64, AlgebraError> {
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while matches!(self.peek(), Some(b'0'..=b'9')) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos]).ok().and_then(|t| t.parse().ok()).map_or_else(|| self.err("expected integer"), Ok)
    }

    fn term(&mut self) -> Result<(BigInt, Monomial), AlgebraError> {
        let mut coef = BigInt::one();
        let mut mono = Monomial::one();
        let mut first = true;
        loop {
            match self.peek() {
                Some(b'0'..=b'9') if first => {
                    let start = self.pos;
                    while matches!(self.peek(), Some(b'0'..=b'9')) {
                        self.pos += 1;
                    }
                    let t = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                    coef = t.parse::<BigInt>().unwrap();
                }
                Some(_) => {
                    let (v, e) = self.factor()?;
                    mono.mul_var(&v, e);
                }
                None => return self.err("unexpected end of input"),
            }
            first = false;
            if self.peek() == Some(b'*') {
                self.pos += 1;
            } else {
                break;
            }
        }
        Ok((coef, mono))
    }

    fn factor(&mut self) -> Result<(VarId, i32), AlgebraError> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_alphabetic()) {
            self.pos += 1;
        }
        let prefix = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let Some(kind) = VarKind::from_prefix(prefix) else {
            return self.err("unknown variable prefix");
        };
        if self.peek() != Some(b':') {
            return self.err("expected ':' after variable prefix");
        }
        self.pos += 1;
        let lstart = self.pos;
        while matches!(self.peek(), Some(c) if is_label_char(c as char)) {
            self.pos += 1;
        }
        if lstart == self.pos {
            return self.err("empty variable label");
        }
        let label = std::str::from_utf8(&self.src[lstart..self.pos]).unwrap().to_string();
        let mut e = 2i32;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            if self.peek() == Some(b'(') {
                self.pos += 1;
                let n = self.integer()?;
                if self.src.get(self.pos..self.pos + 3) != Some(b"/2)") {
                    return self.err("expected '/2)'");
                }
                self.pos += 3;
                e = n as i32;
            } else {
                e = 2 * self.integer()? as i32;
            }
        }
        Ok((VarId { kind, label }, e))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c.clone());
        }
        out
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly { terms: self.terms.iter().map(|(m, c)| (m.clone(), -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr for LaurentPoly {
            type Output = LaurentPoly;
            fn $f(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$f(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -&self
    }
}

impl From<Monomial> for LaurentPoly {
    fn from(m: Monomial) -> Self {
        LaurentPoly::from_monomial(m)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c)
    }
}

pub fn poly_add(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    p + q
}

pub fn poly_mul(p: &LaurentPoly, q: &LaurentPoly) -> LaurentPoly {
    p * q
}

/// Row-major 2x2 matrix `[[a, b], [c, d]]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: LaurentPoly,
    pub b: LaurentPoly,
    pub c: LaurentPoly,
    pub d: LaurentPoly,
}

impl Mat2 {
    pub fn new(a: LaurentPoly, b: LaurentPoly, c: LaurentPoly, d: LaurentPoly) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity() -> Self {
        Mat2::new(LaurentPoly::one(), LaurentPoly::zero(), LaurentPoly::zero(), LaurentPoly::one())
    }

    pub fn scalar(s: LaurentPoly) -> Self {
        Mat2::new(s.clone(), LaurentPoly::zero(), LaurentPoly::zero(), s)
    }

    pub fn from_ints(a: i64, b: i64, c: i64, d: i64) -> Self {
        Mat2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn mul(&self, n: &Mat2) -> Mat2 {
        Mat2 {
            a: &(&self.a * &n.a) + &(&self.b * &n.c),
            b: &(&self.a * &n.b) + &(&self.b * &n.d),
            c: &(&self.c * &n.a) + &(&self.d * &n.c),
            d: &(&self.c * &n.b) + &(&self.d * &n.d),
        }
    }

    pub fn det(&self) -> LaurentPoly {
        &(&self.a * &self.d) - &(&self.b * &self.c)
    }

    pub fn trace(&self) -> LaurentPoly {
        &self.a + &self.d
    }

    pub fn ur(&self) -> &LaurentPoly {
        &self.b
    }

    pub fn neg(&self) -> Mat2 {
        Mat2::new(-&self.a, -&self.b, -&self.c, -&self.d)
    }

    pub fn scale(&self, s: &LaurentPoly) -> Mat2 {
        Mat2::new(&self.a * s, &self.b * s, &self.c * s, &self.d * s)
    }

    pub fn inverse_det1(&self) -> Result<Mat2, AlgebraError> {
        let det = self.det();
        if det != LaurentPoly::one() {
            return Err(AlgebraError::NotUnimodular(det.to_string()));
        }
        Ok(Mat2::new(self.d.clone(), -&self.b, -&self.c, self.a.clone()))
    }

    pub fn is_lower_unitriangular(&self) -> bool {
        self.a == LaurentPoly::one() && self.b.is_zero() && self.d == LaurentPoly::one()
    }

    pub fn substitute(&self, sub: &BTreeMap<VarId, LaurentPoly>) -> Result<Mat2, AlgebraError> {
        Ok(Mat2::new(self.a.substitute(sub)?, self.b.substitute(sub)?, self.c.substitute(sub)?, self.d.substitute(sub)?))
    }

    /// Product of a right-to-left word: `ms[n-1] * ... * ms[0]`.
    pub fn product_rtl<'a>(ms: impl IntoIterator<Item = &'a Mat2>) -> Mat2 {
        ms.into_iter().fold(Mat2::identity(), |acc, m| m.mul(&acc))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

pub fn mat_mul(m: &Mat2, n: &Mat2) -> Mat2 {
    m.mul(n)
}

pub fn mat_inverse_det1(m: &Mat2) -> Result<Mat2, AlgebraError> {
    m.inverse_det1()
}

pub fn mat_trace(m: &Mat2) -> LaurentPoly {
    m.trace()
}

pub fn mat_ur(m: &Mat2) -> LaurentPoly {
    m.b.clone()
}
