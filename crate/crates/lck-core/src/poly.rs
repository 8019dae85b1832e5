//! Exact multivariate polynomial arithmetic over ℚ.
//!
//! Every quantity in this crate is a [`ScalarPoly`]: a sparse polynomial with
//! `BigRational` coefficients over a shared, ordered symbol table. Symbols are
//! tagged by role (derivation, spectral parameter, tensor slot derivation, or
//! free scalar parameter) so that higher layers can validate which symbols are
//! allowed where. There is no floating point anywhere; equality of
//! polynomials is equality of canonical forms.

use num::bigint::BigInt;
use num::rational::BigRational;
use num::{One, Signed, Zero};
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

/// Role tag for a symbol.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymbolKind {
    /// A derivation symbol: the output-slot ∂ (written `D`).
    Deriv,
    /// A spectral parameter: λ (`L`) or μ (`M`).
    Spectral,
    /// A tensor slot derivation: `D1`, `D2`, `D3`.
    Slot,
    /// A free scalar parameter (k, l, m, t, ...).
    Param,
}

#[derive(Debug)]
struct CtxInner {
    symbols: Vec<(String, SymbolKind)>,
    by_name: HashMap<String, usize>,
    max_degree: u32,
}

/// Symbol index of the output-slot derivation `D`.
pub const SYM_D: usize = 0;
/// Symbol index of the spectral parameter `L` (λ).
pub const SYM_L: usize = 1;
/// Symbol index of the spectral parameter `M` (μ).
pub const SYM_M: usize = 2;
/// Symbol index of the first tensor slot derivation `D1`.
pub const SYM_D1: usize = 3;
/// Symbol index of the second tensor slot derivation `D2`.
pub const SYM_D2: usize = 4;
/// Symbol index of the third tensor slot derivation `D3`.
pub const SYM_D3: usize = 5;
/// Index of the first parameter symbol in a standard context.
pub const FIRST_PARAM: usize = 6;

const DEFAULT_MAX_DEGREE: u32 = 64;

fn configured_max_degree() -> u32 {
    let cap = match std::env::var("LCK_MAX_DEGREE") {
        Ok(s) => s.trim().parse().unwrap_or(DEFAULT_MAX_DEGREE),
        Err(_) => DEFAULT_MAX_DEGREE,
    };
    cap.min(u16::MAX as u32)
}

/// A shared symbol table plus the exponent cap. Cheap to clone.
///
/// Standard layout: `D, L, M, D1, D2, D3` followed by the declared scalar
/// parameters. Extension appends symbols, so polynomials over a prefix table
/// lift into the extended one without re-indexing.
#[derive(Clone)]
pub struct Context {
    inner: Arc<CtxInner>,
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Context[")?;
        for (i, (n, _)) in self.inner.symbols.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{n}")?;
        }
        write!(f, "]")
    }
}

impl PartialEq for Context {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.symbols == other.inner.symbols
    }
}
impl Eq for Context {}

impl Context {
    /// Standard context with the six built-in symbols and the given parameters.
    pub fn standard(params: &[&str]) -> Context {
        let mut symbols = vec![
            ("D".to_string(), SymbolKind::Deriv),
            ("L".to_string(), SymbolKind::Spectral),
            ("M".to_string(), SymbolKind::Spectral),
            ("D1".to_string(), SymbolKind::Slot),
            ("D2".to_string(), SymbolKind::Slot),
            ("D3".to_string(), SymbolKind::Slot),
        ];
        for p in params {
            symbols.push((p.to_string(), SymbolKind::Param));
        }
        Self::from_symbols(symbols)
    }

    fn from_symbols(symbols: Vec<(String, SymbolKind)>) -> Context {
        let by_name = symbols
            .iter()
            .enumerate()
            .map(|(i, (n, _))| (n.clone(), i))
            .collect();
        Context {
            inner: Arc::new(CtxInner {
                symbols,
                by_name,
                max_degree: configured_max_degree(),
            }),
        }
    }

    /// New context with extra parameters appended. Existing indices are stable.
    pub fn extend_params(&self, extra: &[&str]) -> Context {
        let mut symbols = self.inner.symbols.clone();
        for p in extra {
            assert!(
                !self.inner.by_name.contains_key(*p),
                "symbol {p} already declared"
            );
            symbols.push((p.to_string(), SymbolKind::Param));
        }
        Self::from_symbols(symbols)
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.inner.symbols.len()
    }

    pub fn max_degree(&self) -> u32 {
        self.inner.max_degree
    }

    pub fn name(&self, idx: usize) -> &str {
        &self.inner.symbols[idx].0
    }

    pub fn kind(&self, idx: usize) -> SymbolKind {
        self.inner.symbols[idx].1
    }

    pub fn lookup(&self, name: &str) -> Option<usize> {
        self.inner.by_name.get(name).copied()
    }

    /// Parameter symbol names in declaration order.
    pub fn param_names(&self) -> Vec<&str> {
        self.inner
            .symbols
            .iter()
            .filter(|(_, k)| *k == SymbolKind::Param)
            .map(|(n, _)| n.as_str())
            .collect()
    }

    /// Zero polynomial.
    pub fn zero(&self) -> ScalarPoly {
        ScalarPoly {
            ctx: self.clone(),
            terms: BTreeMap::new(),
        }
    }

    /// Constant one.
    pub fn one(&self) -> ScalarPoly {
        self.int(1)
    }

    /// Integer constant.
    pub fn int(&self, n: i64) -> ScalarPoly {
        self.constant(BigRational::from(BigInt::from(n)))
    }

    /// Rational constant n/d.
    pub fn rat(&self, n: i64, d: i64) -> ScalarPoly {
        assert!(d != 0, "zero denominator");
        self.constant(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn constant(&self, c: BigRational) -> ScalarPoly {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0u16; self.len()], c);
        }
        ScalarPoly {
            ctx: self.clone(),
            terms,
        }
    }

    /// The symbol with the given index, as a degree-one polynomial.
    pub fn sym(&self, idx: usize) -> ScalarPoly {
        assert!(idx < self.len(), "symbol index out of range");
        let mut exps = vec![0u16; self.len()];
        exps[idx] = 1;
        let mut terms = BTreeMap::new();
        terms.insert(exps, BigRational::one());
        ScalarPoly {
            ctx: self.clone(),
            terms,
        }
    }

    pub fn sym_named(&self, name: &str) -> Result<ScalarPoly, PolyError> {
        self.lookup(name)
            .map(|i| self.sym(i))
            .ok_or_else(|| PolyError::UnknownSymbol(name.to_string()))
    }

    pub fn d(&self) -> ScalarPoly {
        self.sym(SYM_D)
    }
    pub fn l(&self) -> ScalarPoly {
        self.sym(SYM_L)
    }
    pub fn m(&self) -> ScalarPoly {
        self.sym(SYM_M)
    }
}

/// Errors from polynomial construction and arithmetic.
#[derive(Debug, Clone, thiserror::Error, PartialEq, Eq)]
pub enum PolyError {
    #[error("exponent {degree} of symbol {symbol} exceeds cap {cap} (set LCK_MAX_DEGREE to raise)")]
    ExponentOverflow {
        symbol: String,
        degree: u64,
        cap: u32,
    },
    #[error("unknown symbol {0}")]
    UnknownSymbol(String),
}

/// A sparse multivariate polynomial over ℚ in canonical form: no zero
/// coefficients, exponent vectors kept sorted by the map ordering.
#[derive(Clone, PartialEq, Eq)]
pub struct ScalarPoly {
    ctx: Context,
    terms: BTreeMap<Vec<u16>, BigRational>,
}

impl ScalarPoly {
    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// True iff the canonical form is empty. This is the symbolic identity test.
    pub fn is_identically_zero(&self) -> bool {
        self.is_zero()
    }

    /// True iff the polynomial is a nonzero rational constant.
    pub fn is_unit_constant(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().unwrap().iter().all(|&e| e == 0)
    }

    /// The constant term.
    pub fn constant_term(&self) -> BigRational {
        self.terms
            .get(&vec![0u16; self.ctx.len()])
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Largest exponent of the given symbol.
    pub fn degree_in(&self, idx: usize) -> u32 {
        self.terms
            .keys()
            .map(|e| e[idx] as u32)
            .max()
            .unwrap_or(0)
    }

    /// Largest exponent over all symbols.
    pub fn max_degree_any(&self) -> u32 {
        self.terms
            .keys()
            .flat_map(|e| e.iter().map(|&x| x as u32))
            .max()
            .unwrap_or(0)
    }

    /// Indices of symbols actually occurring.
    pub fn support(&self) -> Vec<usize> {
        let mut seen = vec![false; self.ctx.len()];
        for e in self.terms.keys() {
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    seen[i] = true;
                }
            }
        }
        seen.iter()
            .enumerate()
            .filter_map(|(i, &s)| s.then_some(i))
            .collect()
    }

    /// True iff every occurring symbol satisfies the predicate.
    pub fn uses_only(&self, mut allowed: impl FnMut(usize, SymbolKind) -> bool) -> bool {
        self.support()
            .into_iter()
            .all(|i| allowed(i, self.ctx.kind(i)))
    }

    fn assert_same_ctx(&self, other: &ScalarPoly) {
        assert!(
            self.ctx == other.ctx,
            "polynomials from different symbol tables: {:?} vs {:?}",
            self.ctx,
            other.ctx
        );
    }

    fn insert_term(&mut self, exps: Vec<u16>, c: BigRational) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(exps) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                let sum = o.get() + c;
                if sum.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = sum;
                }
            }
        }
    }

    /// Exact product; errors if an exponent would exceed the cap.
    pub fn mul(&self, other: &ScalarPoly) -> Result<ScalarPoly, PolyError> {
        self.assert_same_ctx(other);
        let cap = self.ctx.max_degree();
        let mut out = self.ctx.zero();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let mut e = ea.clone();
                for (i, x) in e.iter_mut().enumerate() {
                    let sum = *x as u64 + eb[i] as u64;
                    if sum > cap as u64 {
                        return Err(PolyError::ExponentOverflow {
                            symbol: self.ctx.name(i).to_string(),
                            degree: sum,
                            cap,
                        });
                    }
                    *x = sum as u16;
                }
                out.insert_term(e, ca * cb);
            }
        }
        Ok(out)
    }

    /// Exact power by repeated squaring.
    pub fn pow(&self, n: u32) -> Result<ScalarPoly, PolyError> {
        let mut acc = self.ctx.one();
        let mut base = self.clone();
        let mut n = n;
        loop {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            n >>= 1;
            if n == 0 {
                return Ok(acc);
            }
            base = base.mul(&base)?;
        }
    }

    pub fn scale(&self, c: &BigRational) -> ScalarPoly {
        if c.is_zero() {
            return self.ctx.zero();
        }
        ScalarPoly {
            ctx: self.ctx.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn scale_int(&self, n: i64) -> ScalarPoly {
        self.scale(&BigRational::from(BigInt::from(n)))
    }

    /// Simultaneous substitution of symbols (by index) with polynomials.
    /// Symbols not bound are left alone.
    pub fn substitute(
        &self,
        bindings: &HashMap<usize, ScalarPoly>,
    ) -> Result<ScalarPoly, PolyError> {
        for v in bindings.values() {
            self.assert_same_ctx(v);
        }
        // memoize powers of each binding
        let mut powers: HashMap<(usize, u16), ScalarPoly> = HashMap::new();
        let mut out = self.ctx.zero();
        for (exps, c) in &self.terms {
            let mut term = self.ctx.constant(c.clone());
            for (i, &e) in exps.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                match bindings.get(&i) {
                    None => {
                        let mut mono = vec![0u16; self.ctx.len()];
                        mono[i] = e;
                        let mut m = self.ctx.zero();
                        m.insert_term(mono, BigRational::one());
                        term = term.mul(&m)?;
                    }
                    Some(b) => {
                        let p = match powers.get(&(i, e)) {
                            Some(p) => p.clone(),
                            None => {
                                let p = b.pow(e as u32)?;
                                powers.insert((i, e), p.clone());
                                p
                            }
                        };
                        term = term.mul(&p)?;
                    }
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Substitute a single symbol.
    pub fn subst_sym(&self, idx: usize, value: &ScalarPoly) -> Result<ScalarPoly, PolyError> {
        let mut b = HashMap::new();
        b.insert(idx, value.clone());
        self.substitute(&b)
    }

    /// Substitute symbols by name.
    pub fn substitute_named(
        &self,
        bindings: &HashMap<String, ScalarPoly>,
    ) -> Result<ScalarPoly, PolyError> {
        let mut by_idx = HashMap::new();
        for (name, v) in bindings {
            let idx = self
                .ctx
                .lookup(name)
                .ok_or_else(|| PolyError::UnknownSymbol(name.clone()))?;
            by_idx.insert(idx, v.clone());
        }
        self.substitute(&by_idx)
    }

    /// Re-express over a context that contains all of this polynomial's
    /// symbols by name (typically an extension of the original table).
    pub fn lift_to(&self, ctx: &Context) -> Result<ScalarPoly, PolyError> {
        if self.ctx == *ctx {
            return Ok(ScalarPoly {
                ctx: ctx.clone(),
                terms: self.terms.clone(),
            });
        }
        let map: Vec<usize> = (0..self.ctx.len())
            .map(|i| {
                ctx.lookup(self.ctx.name(i))
                    .ok_or_else(|| PolyError::UnknownSymbol(self.ctx.name(i).to_string()))
            })
            .collect::<Result<_, _>>()?;
        let mut out = ctx.zero();
        for (exps, c) in &self.terms {
            let mut e = vec![0u16; ctx.len()];
            for (i, &x) in exps.iter().enumerate() {
                e[map[i]] = x;
            }
            out.insert_term(e, c.clone());
        }
        Ok(out)
    }

    /// The coefficient of `sym^deg`, as a polynomial in the other symbols.
    pub fn coeff_of(&self, sym: usize, deg: u16) -> ScalarPoly {
        let mut out = self.ctx.zero();
        for (exps, c) in &self.terms {
            if exps[sym] == deg {
                let mut e = exps.clone();
                e[sym] = 0;
                out.insert_term(e, c.clone());
            }
        }
        out
    }

    /// Exact evaluation at rational points, indexed by symbol.
    pub fn eval(&self, values: &[BigRational]) -> BigRational {
        assert_eq!(values.len(), self.ctx.len());
        let mut acc = BigRational::zero();
        for (exps, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in exps.iter().enumerate() {
                for _ in 0..e {
                    t *= &values[i];
                }
            }
            acc += t;
        }
        acc
    }
}

impl std::ops::Add for &ScalarPoly {
    type Output = ScalarPoly;
    fn add(self, rhs: &ScalarPoly) -> ScalarPoly {
        self.assert_same_ctx(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.insert_term(e.clone(), c.clone());
        }
        out
    }
}

impl std::ops::Sub for &ScalarPoly {
    type Output = ScalarPoly;
    fn sub(self, rhs: &ScalarPoly) -> ScalarPoly {
        self + &(-rhs)
    }
}

impl std::ops::Neg for &ScalarPoly {
    type Output = ScalarPoly;
    fn neg(self) -> ScalarPoly {
        ScalarPoly {
            ctx: self.ctx.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), -c.clone()))
                .collect(),
        }
    }
}

fn format_coeff(c: &BigRational) -> String {
    if c.denom().is_one() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

impl fmt::Display for ScalarPoly {
    /// Canonical rendering: monomials in descending table order, explicit `*`
    /// and `^`, rational coefficients as `p/q`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (exps, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut parts: Vec<String> = Vec::new();
            if !abs.is_one() || exps.iter().all(|&e| e == 0) {
                parts.push(format_coeff(&abs));
            }
            for (i, &e) in exps.iter().enumerate() {
                if e == 1 {
                    parts.push(self.ctx.name(i).to_string());
                } else if e > 1 {
                    parts.push(format!("{}^{}", self.ctx.name(i), e));
                }
            }
            write!(f, "{}", parts.join("*"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for ScalarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// ---------------------------------------------------------------------------
// Evaluation oracle
// ---------------------------------------------------------------------------

/// Deterministic pseudo-random stream (splitmix64).
struct SplitMix64(u64);

impl SplitMix64 {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }
}

/// The per-symbol point sets used by the oracle: `count` consecutive integers
/// starting at a seeded offset, one run per occurring symbol.
fn oracle_points(p: &ScalarPoly, count: u32, seed: u64) -> Vec<(usize, Vec<i64>)> {
    let mut rng = SplitMix64(seed ^ 0x5ca1ab1e);
    let mut out = Vec::new();
    for idx in p.support() {
        let base = (rng.next() % 41) as i64 - 20;
        out.push((idx, (0..count as i64).map(|j| base + j).collect()));
    }
    out
}

/// Evaluates `p` at `count` integer points per occurring symbol, drawn
/// deterministically from the seed. Returns true iff every evaluation is
/// zero. If `count` exceeds the degree of `p` in each symbol, agreement with
/// the symbolic zero test is a theorem (iterated interpolation).
pub fn evaluation_oracle(p: &ScalarPoly, count: u32, seed: u64) -> bool {
    find_witness(p, count, seed).is_none()
}

/// First grid point (if any) at which `p` evaluates to a nonzero value.
/// Returns the assignment as (symbol name, value) pairs plus the value.
pub fn find_witness(
    p: &ScalarPoly,
    count: u32,
    seed: u64,
) -> Option<(Vec<(String, i64)>, BigRational)> {
    if p.is_zero() {
        return None;
    }
    let count = count.max(1);
    let grids = oracle_points(p, count, seed);
    let n = p.ctx().len();
    let mut values = vec![BigRational::zero(); n];
    if grids.is_empty() {
        // constant polynomial
        let v = p.eval(&values);
        if v.is_zero() {
            return None;
        }
        return Some((Vec::new(), v));
    }
    let mut counters = vec![0usize; grids.len()];
    loop {
        for (slot, &(idx, ref pts)) in grids.iter().enumerate() {
            values[idx] = BigRational::from(BigInt::from(pts[counters[slot]]));
        }
        let v = p.eval(&values);
        if !v.is_zero() {
            let assignment = grids
                .iter()
                .enumerate()
                .map(|(slot, &(idx, ref pts))| {
                    (p.ctx().name(idx).to_string(), pts[counters[slot]])
                })
                .collect();
            return Some((assignment, v));
        }
        // increment mixed-radix counter
        let mut slot = 0;
        loop {
            counters[slot] += 1;
            if counters[slot] < count as usize {
                break;
            }
            counters[slot] = 0;
            slot += 1;
            if slot == grids.len() {
                return None;
            }
        }
    }
}

/// Point count per symbol that makes the oracle a certificate for `p`:
/// one more than the largest per-symbol degree.
pub fn certifying_count(p: &ScalarPoly) -> u32 {
    p.max_degree_any() + 1
}
