//! Tensor elements of A⊗A and A⊗A⊗A, the r♯ correspondence, skew-symmetry,
//! the conformal classical Yang-Baxter equation reduced modulo ∂^⊗3, and
//! conformal r-matrix-Nijenhuis structures.
//!
//! A `Tensor2` coefficient `R[i][j](D1,D2)` means `Σ R[i][j](∂₁,∂₂) e_i⊗e_j`
//! where `D1`, `D2` are the slot derivations. The quotient modulo ∂^⊗3 is
//! taken by the substitution `D3 → −D1−D2`, the canonical section of the
//! quotient for a free module.

use crate::freemod::{CdHom, ModuleError};
use crate::lca::{LcaError, LcaStructure};
use crate::nijenhuis::check_nijenhuis_operator;
use crate::ooperator::{check_on_structure, OOperatorError};
use crate::symplectic::SymplecticError;
use crate::parallel::indexed_map;
use crate::poly::{Context, PolyError, ScalarPoly, SymbolKind, SYM_D, SYM_D1, SYM_D2, SYM_D3};
use crate::rep::{adjoint, coadjoint, RepError, RepStructure};
use crate::report::{CheckItem, Report};
use crate::symplectic::TwoForm;
use std::collections::HashMap;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error)]
pub enum YbeError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error(transparent)]
    Lca(#[from] LcaError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error(transparent)]
    OOperator(#[from] OOperatorError),
    #[error(transparent)]
    Symplectic(#[from] Box<SymplecticError>),
    #[error("tensor coefficient uses symbol {0}; only D1, D2 and parameters are allowed")]
    ForbiddenSymbol(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("pairing identity violated while building r from a 2-form (internal)")]
    PairingMismatch,
}

/// An element of A⊗A over the algebra's module.
#[derive(Clone)]
pub struct Tensor2 {
    pub algebra: Arc<LcaStructure>,
    /// `coeffs[i][j](D1, D2)`.
    pub coeffs: Vec<Vec<ScalarPoly>>,
}

impl std::fmt::Debug for Tensor2 {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let basis = &self.algebra.module().basis;
        let mut first = true;
        for (i, row) in self.coeffs.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if p.is_zero() {
                    continue;
                }
                if !first {
                    write!(f, " + ")?;
                }
                first = false;
                write!(f, "({p})*{}(x){}", basis[i], basis[j])?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

fn validate_slot_poly(p: &ScalarPoly, allowed: &[usize]) -> Result<(), YbeError> {
    for idx in p.support() {
        let ok = allowed.contains(&idx) || p.ctx().kind(idx) == SymbolKind::Param;
        if !ok {
            return Err(YbeError::ForbiddenSymbol(p.ctx().name(idx).to_string()));
        }
    }
    Ok(())
}

impl Tensor2 {
    pub fn new(
        algebra: &Arc<LcaStructure>,
        coeffs: Vec<Vec<ScalarPoly>>,
    ) -> Result<Tensor2, YbeError> {
        let n = algebra.rank();
        assert_eq!(coeffs.len(), n, "tensor shape");
        for row in &coeffs {
            assert_eq!(row.len(), n, "tensor shape");
            for p in row {
                validate_slot_poly(p, &[SYM_D1, SYM_D2])?;
            }
        }
        Ok(Tensor2 {
            algebra: algebra.clone(),
            coeffs,
        })
    }

    pub fn zero(algebra: &Arc<LcaStructure>) -> Tensor2 {
        let n = algebra.rank();
        Tensor2 {
            algebra: algebra.clone(),
            coeffs: vec![vec![algebra.ctx().zero(); n]; n],
        }
    }

    pub fn ctx(&self) -> &Context {
        self.algebra.ctx()
    }

    pub fn add(&self, other: &Tensor2) -> Tensor2 {
        Tensor2 {
            algebra: self.algebra.clone(),
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(r, s)| r.iter().zip(s).map(|(a, b)| a + b).collect())
                .collect(),
        }
    }

    pub fn scale(&self, s: &ScalarPoly) -> Result<Tensor2, YbeError> {
        Ok(Tensor2 {
            algebra: self.algebra.clone(),
            coeffs: self
                .coeffs
                .iter()
                .map(|row| row.iter().map(|p| p.mul(s)).collect::<Result<_, _>>())
                .collect::<Result<_, _>>()?,
        })
    }

    /// Skew-symmetry residuals `R[i][j](D1,D2) + R[j][i](D2,D1)` per entry.
    pub fn is_skew(&self, subject: &str) -> Report {
        let ctx = self.ctx();
        let n = self.algebra.rank();
        let basis = &self.algebra.module().basis;
        let mut report = Report::new("skew", subject);
        let swap = |p: &ScalarPoly| -> Result<ScalarPoly, PolyError> {
            let mut b = HashMap::new();
            b.insert(SYM_D1, ctx.sym(SYM_D2));
            b.insert(SYM_D2, ctx.sym(SYM_D1));
            p.substitute(&b)
        };
        for i in 0..n {
            for j in 0..n {
                let res = match swap(&self.coeffs[j][i]) {
                    Ok(sw) => &self.coeffs[i][j] + &sw,
                    Err(e) => {
                        report.push(CheckItem::flag(format!("swap ({i},{j}) [{e}]"), false));
                        continue;
                    }
                };
                report.push(CheckItem::residual(
                    format!("skew ({},{})", basis[i], basis[j]),
                    vec![("1".to_string(), res)],
                ));
            }
        }
        report
    }

    /// The matrix of `r♯_λ` on dual generators:
    /// `r♯_λ(e_j') = Σ_k R[j][k](−λ−∂, ∂) e_k`, entries polynomials in (λ,∂).
    pub fn r_sharp_lambda(&self) -> Result<Vec<Vec<ScalarPoly>>, YbeError> {
        let ctx = self.ctx();
        let mut b = HashMap::new();
        b.insert(SYM_D1, -&(&ctx.l() + &ctx.d()));
        b.insert(SYM_D2, ctx.d());
        Ok(self
            .coeffs
            .iter()
            .map(|row| row.iter().map(|p| p.substitute(&b)).collect::<Result<_, _>>())
            .collect::<Result<Vec<Vec<_>>, _>>()?)
    }

    /// `r♯₀ : A*^c → A` as a ℂ[∂]-module homomorphism: the matrix
    /// `T[j][k](∂) = R[j][k](−∂, ∂)`.
    pub fn r_sharp0(&self) -> Result<CdHom, YbeError> {
        let ctx = self.ctx();
        let mut b = HashMap::new();
        b.insert(SYM_D1, -&ctx.d());
        b.insert(SYM_D2, ctx.d());
        let mat = self
            .coeffs
            .iter()
            .map(|row| row.iter().map(|p| p.substitute(&b)).collect::<Result<_, _>>())
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Ok(CdHom::new(
            ctx,
            &self.algebra.module().dual(),
            self.algebra.module(),
            mat,
        )?)
    }

    /// True iff `r♯_λ = r♯₀`, i.e. `R[i][j](−λ−∂,∂) ≡ R[i][j](−∂,∂)`.
    pub fn is_lambda_constant(&self) -> Result<bool, YbeError> {
        let with_lambda = self.r_sharp_lambda()?;
        let at_zero = self.r_sharp0()?;
        for (row_l, row_0) in with_lambda.iter().zip(&at_zero.mat) {
            for (a, b) in row_l.iter().zip(row_0) {
                if !(a - b).is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Non-degeneracy of a tensor is two separate predicates here:
    /// λ-independence of r♯ and invertibility of r♯₀ over ℂ[∂]; both are
    /// required and reported individually.
    pub fn is_nondegenerate(&self, subject: &str) -> Result<Report, YbeError> {
        let mut report = Report::new("nondegenerate-r", subject);
        report.note(
            "non-degeneracy is checked as two separate predicates, λ-independence of r♯ and invertibility of r♯₀; both are required",
        );
        let lc = self.is_lambda_constant()?;
        report.push(CheckItem::flag("lambda-constant", lc));
        let (unit, det) = self.r_sharp0()?.det_unit()?;
        report.push(CheckItem::flag("r_sharp0 invertible", unit).with_diagnostic("det", det));
        Ok(report)
    }

    /// `r_N = (id ⊗ N)(r)`: coefficient transform
    /// `R_N[i][k](D1,D2) = Σ_j R[i][j](D1,D2) · N[j][k](D2)`.
    pub fn deform_by(&self, n_hom: &CdHom) -> Result<Tensor2, YbeError> {
        let ctx = self.ctx();
        let n = self.algebra.rank();
        let mut coeffs = vec![vec![ctx.zero(); n]; n];
        for i in 0..n {
            for k in 0..n {
                let mut acc = ctx.zero();
                for j in 0..n {
                    if self.coeffs[i][j].is_zero() || n_hom.mat[j][k].is_zero() {
                        continue;
                    }
                    let nk = n_hom.mat[j][k].subst_sym(SYM_D, &ctx.sym(SYM_D2))?;
                    acc = &acc + &self.coeffs[i][j].mul(&nk)?;
                }
                coeffs[i][k] = acc;
            }
        }
        Tensor2::new(&self.algebra, coeffs)
    }

    pub fn lift_to_ctx(&self, ctx2: &Context, algebra: &Arc<LcaStructure>) -> Result<Tensor2, YbeError> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|row| row.iter().map(|p| p.lift_to(ctx2)).collect::<Result<_, _>>())
            .collect::<Result<_, _>>()?;
        Ok(Tensor2 {
            algebra: algebra.clone(),
            coeffs,
        })
    }
}

/// An element of A⊗A⊗A with coefficients in (D1, D2, D3).
#[derive(Clone)]
pub struct Tensor3 {
    pub algebra: Arc<LcaStructure>,
    pub coeffs: Vec<Vec<Vec<ScalarPoly>>>,
}

impl Tensor3 {
    pub fn zero(algebra: &Arc<LcaStructure>) -> Tensor3 {
        let n = algebra.rank();
        Tensor3 {
            algebra: algebra.clone(),
            coeffs: vec![vec![vec![algebra.ctx().zero(); n]; n]; n],
        }
    }

    /// Reduce modulo ∂^⊗3 by the substitution `D3 → −D1−D2`.
    pub fn reduce_mod_diagonal(&self) -> Result<Vec<Vec<Vec<ScalarPoly>>>, PolyError> {
        let ctx = self.algebra.ctx();
        let sub = -&(&ctx.sym(SYM_D1) + &ctx.sym(SYM_D2));
        self.coeffs
            .iter()
            .map(|plane| {
                plane
                    .iter()
                    .map(|row| row.iter().map(|p| p.subst_sym(SYM_D3, &sub)).collect())
                    .collect()
            })
            .collect()
    }
}

/// Expands `⟦r,r⟧` into a `Tensor3` by the three sums of the conformal
/// classical Yang-Baxter expression. Slot bookkeeping per term (slots are
/// written x=D1, y=D2, z=D3; `P` is the bracket table):
///
/// 1. `[a_i μ a_j] ⊗ b_i ⊗ b_j`, μ → y, bracket output ∂ → x:
///    `+ Σ R[i1][j1](−y,y) · R[i2][j2](x+y,z) · P[i1][i2][k](y,x)` into `(k, j1, j2)`.
/// 2. `a_i ⊗ [a_j μ b_i] ⊗ b_j`, μ → z, output ∂ → y:
///    `− Σ R[i1][j1](x,y+z) · R[i2][j2](−z,z) · P[i2][j1][k](z,y)` into `(i1, k, j2)`.
/// 3. `a_i ⊗ a_j ⊗ [b_j μ b_i]`, μ → y, output ∂ → z:
///    `− Σ R[i1][j1](x,y+z) · R[i2][j2](y,−y) · P[j2][j1][k](y,z)` into `(i1, i2, k)`.
type Tensor3Contribution = Vec<((usize, usize, usize), ScalarPoly)>;

pub fn cybe_bracket(r: &Tensor2) -> Result<Tensor3, YbeError> {
    let ctx = r.ctx();
    let n = r.algebra.rank();
    let x = ctx.sym(SYM_D1);
    let y = ctx.sym(SYM_D2);
    let z = ctx.sym(SYM_D3);
    let table = r.algebra.table();

    let subst2 = |p: &ScalarPoly, u: &ScalarPoly, v: &ScalarPoly| -> Result<ScalarPoly, PolyError> {
        let mut b = HashMap::new();
        b.insert(SYM_D1, u.clone());
        b.insert(SYM_D2, v.clone());
        p.substitute(&b)
    };
    let subst_table =
        |p: &ScalarPoly, mu: &ScalarPoly, d: &ScalarPoly| -> Result<ScalarPoly, PolyError> {
            let mut b = HashMap::new();
            b.insert(crate::poly::SYM_L, mu.clone());
            b.insert(SYM_D, d.clone());
            p.substitute(&b)
        };

    let mut out = Tensor3::zero(&r.algebra);
    let flat: Vec<(usize, usize, usize, usize)> = (0..n)
        .flat_map(|a| (0..n).flat_map(move |b| (0..n).flat_map(move |c| (0..n).map(move |d| (a, b, c, d)))))
        .collect();
    // contributions computed per (i1, j1, i2, j2) quadruple, then accumulated
    let contribs = indexed_map(flat.len(), |t| {
        let (i1, j1, i2, j2) = flat[t];
        let compute = || -> Result<Tensor3Contribution, PolyError> {
            let mut acc: Tensor3Contribution = Vec::new();
            let r1 = &r.coeffs[i1][j1];
            let r2 = &r.coeffs[i2][j2];
            if r1.is_zero() || r2.is_zero() {
                return Ok(acc);
            }
            // term 1
            let f1 = subst2(r1, &(-&y), &y)?;
            let f2 = subst2(r2, &(&x + &y), &z)?;
            if !f1.is_zero() && !f2.is_zero() {
                let factor = f1.mul(&f2)?;
                for k in 0..n {
                    let p = &table[i1][i2][k];
                    if !p.is_zero() {
                        let val = factor.mul(&subst_table(p, &y, &x)?)?;
                        acc.push(((k, j1, j2), val));
                    }
                }
            }
            // term 2
            let f1 = subst2(r1, &x, &(&y + &z))?;
            let f2 = subst2(r2, &(-&z), &z)?;
            if !f1.is_zero() && !f2.is_zero() {
                let factor = f1.mul(&f2)?;
                for k in 0..n {
                    let p = &table[i2][j1][k];
                    if !p.is_zero() {
                        let val = factor.mul(&subst_table(p, &z, &y)?)?;
                        acc.push(((i1, k, j2), -&val));
                    }
                }
            }
            // term 3
            let f1 = subst2(r1, &x, &(&y + &z))?;
            let f2 = subst2(r2, &y, &(-&y))?;
            if !f1.is_zero() && !f2.is_zero() {
                let factor = f1.mul(&f2)?;
                for k in 0..n {
                    let p = &table[j2][j1][k];
                    if !p.is_zero() {
                        let val = factor.mul(&subst_table(p, &y, &z)?)?;
                        acc.push(((i1, i2, k), -&val));
                    }
                }
            }
            Ok(acc)
        };
        compute()
    });
    for contrib in contribs {
        for ((a, b, c), val) in contrib? {
            out.coeffs[a][b][c] = &out.coeffs[a][b][c] + &val;
        }
    }
    Ok(out)
}

/// Conformal classical Yang-Baxter check: `⟦r,r⟧ ≡ 0 mod ∂^⊗3`, reduced by
/// the substitution `D3 → −D1−D2` componentwise.
pub fn cybe_check(r: &Tensor2, subject: &str) -> Result<Report, YbeError> {
    let expanded = cybe_bracket(r)?;
    let reduced = expanded.reduce_mod_diagonal()?;
    let basis = &r.algebra.module().basis;
    let mut report = Report::new("cybe", subject);
    for (i, plane) in reduced.iter().enumerate() {
        for (j, row) in plane.iter().enumerate() {
            for (k, p) in row.iter().enumerate() {
                report.push(CheckItem::residual(
                    format!("component ({},{},{})", basis[i], basis[j], basis[k]),
                    vec![("1".to_string(), p.clone())],
                ));
            }
        }
    }
    Ok(report)
}

/// The coadjoint pair `(A; ad*)` of a verified algebra.
pub fn coadjoint_pair(algebra: &Arc<LcaStructure>) -> Result<RepStructure, YbeError> {
    Ok(coadjoint(&adjoint(algebra)?)?)
}

/// Conformal r-matrix-Nijenhuis structure check: the λ-level intertwining
/// `N ∘ r♯_λ = r♯_λ ∘ N*` compared symbolically in (λ,∂), with the bracket
/// condition delegated to the ON-structure check of `(r♯₀, N, N*)` on the
/// coadjoint pair. Preconditions (r skew and a conformal r-matrix, N
/// Nijenhuis) are named on failure.
pub fn check_rmatrix_nijenhuis(
    r: &Tensor2,
    n_hom: &CdHom,
    subject: &str,
) -> Result<Report, YbeError> {
    let skew = r.is_skew(subject);
    if !skew.passed() {
        return Err(YbeError::Precondition(format!("r is not skew:\n{skew}")));
    }
    let cybe = cybe_check(r, subject)?;
    if !cybe.passed() {
        return Err(YbeError::Precondition(format!(
            "r is not a conformal r-matrix:\n{cybe}"
        )));
    }
    let nij = check_nijenhuis_operator(&r.algebra, n_hom);
    if !nij.passed() {
        return Err(YbeError::Precondition(format!(
            "N is not a Nijenhuis operator:\n{nij}"
        )));
    }
    let ctx = r.ctx();
    let n = r.algebra.rank();
    let basis = &r.algebra.module().basis;
    let mut report = Report::new("rmatrix-nijenhuis", subject);
    // N ∘ r♯_λ minus r♯_λ ∘ N* on dual generators, symbolically in λ
    let rs = r.r_sharp_lambda()?;
    let n_dual = n_hom.dual()?;
    let lam_d = &ctx.l() + &ctx.d();
    for j in 0..n {
        let residuals: Result<Vec<(String, ScalarPoly)>, PolyError> = (0..n)
            .map(|m| {
                let mut acc = ctx.zero();
                for k in 0..n {
                    // N applied after r♯: plain coefficient product
                    if !rs[j][k].is_zero() && !n_hom.mat[k][m].is_zero() {
                        acc = &acc + &rs[j][k].mul(&n_hom.mat[k][m])?;
                    }
                    // r♯ applied after N*: dual coefficient sees ∂ → λ+∂
                    if !n_dual.mat[j][k].is_zero() && !rs[k][m].is_zero() {
                        let tw = n_dual.mat[j][k].subst_sym(SYM_D, &lam_d)?;
                        acc = &acc - &tw.mul(&rs[k][m])?;
                    }
                }
                Ok((basis[m].clone(), acc))
            })
            .collect();
        report.push(CheckItem::residual(
            format!("intertwine ({}')", basis[j]),
            residuals?,
        ));
    }
    // bracket condition through the ON-structure on (A; ad*)
    let pair = coadjoint_pair(&r.algebra)?;
    let t = r.r_sharp0()?;
    let on = check_on_structure(&pair, &t, n_hom, &n_hom.dual()?, subject)?;
    report.absorb("on-structure", on);
    Ok(report)
}

/// The family `r_{N^k}` for `k ≤ kmax`: each member is checked skew, and each
/// pair is checked as a symbolic linear combination solving the CYBE.
pub fn r_deform_family(
    r: &Tensor2,
    n_hom: &CdHom,
    kmax: u32,
    subject: &str,
) -> Result<(Vec<Tensor2>, Report), YbeError> {
    let rn = check_rmatrix_nijenhuis(r, n_hom, subject)?;
    if !rn.passed() {
        return Err(YbeError::Precondition(format!(
            "(r,N) is not an r-matrix-Nijenhuis structure:\n{rn}"
        )));
    }
    let mut members = Vec::with_capacity(kmax as usize + 1);
    for k in 0..=kmax {
        members.push(r.deform_by(&n_hom.pow(k)?)?);
    }
    let mut report = Report::new("r-deform-family", subject);
    for (k, rk) in members.iter().enumerate() {
        report.absorb(&format!("r_N^{k} skew"), rk.is_skew(subject));
        report.absorb(&format!("r_N^{k} cybe"), cybe_check(rk, subject)?);
    }
    // pairwise compatibility with fresh symbolic coefficients
    let ctx = r.ctx();
    let mut names = ("rc1".to_string(), "rc2".to_string());
    while ctx.lookup(&names.0).is_some() || ctx.lookup(&names.1).is_some() {
        names.0.push('_');
        names.1.push('_');
    }
    let ctx2 = ctx.extend_params(&[&names.0, &names.1]);
    let alg2 = Arc::new(r.algebra.lift_to(&ctx2)?);
    let c1 = ctx2.sym_named(&names.0)?;
    let c2 = ctx2.sym_named(&names.1)?;
    for k in 0..members.len() {
        for l in (k + 1)..members.len() {
            let a = members[k].lift_to_ctx(&ctx2, &alg2)?.scale(&c1)?;
            let b = members[l].lift_to_ctx(&ctx2, &alg2)?.scale(&c2)?;
            let combo = a.add(&b);
            report.absorb(
                &format!("combination (r_N^{k}, r_N^{l})"),
                cybe_check(&combo, subject)?,
            );
        }
    }
    Ok((members, report))
}

/// Builds `r ∈ A⊗A` from a non-degenerate 2-form through the pairing identity
/// `⟨β, (ω♮)⁻¹(α)⟩_λ = ⟨α⊗β, r⟩_{(−λ,λ)}`: with `G = (ω♮)⁻¹` the coefficients
/// are `R[i][j](D1,D2) = G[i][j](D2)`; the identity is then verified on all
/// dual generator pairs.
pub fn r_from_symplectic(omega: &TwoForm) -> Result<Tensor2, YbeError> {
    let ctx = omega.algebra().ctx();
    let h = omega.omega_natural().map_err(Box::new)?;
    let g = h.invert()?;
    let n = omega.algebra().rank();
    let mut coeffs = vec![vec![ctx.zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            coeffs[i][j] = g.mat[i][j].subst_sym(SYM_D, &ctx.sym(SYM_D2))?;
        }
    }
    let r = Tensor2::new(omega.algebra(), coeffs)?;
    // postcondition: R[i][j](−λ, λ) == G[i][j](λ) on all generator pairs
    let lam = ctx.l();
    for i in 0..n {
        for j in 0..n {
            let mut b = HashMap::new();
            b.insert(SYM_D1, -&lam);
            b.insert(SYM_D2, lam.clone());
            let lhs = r.coeffs[i][j].substitute(&b)?;
            let rhs = g.mat[i][j].subst_sym(SYM_D, &lam)?;
            if !(&lhs - &rhs).is_zero() {
                return Err(YbeError::PairingMismatch);
            }
        }
    }
    Ok(r)
}

/// Test-support oracle: true iff `p` is divisible by `D1 + D2 + D3`, decided
/// by long division along `D3` (independent of the substitution route).
pub fn divisible_by_diagonal(p: &ScalarPoly) -> Result<bool, PolyError> {
    let ctx = p.ctx();
    let divisor = &(&ctx.sym(SYM_D1) + &ctx.sym(SYM_D2)) + &ctx.sym(SYM_D3);
    let mut rem = p.clone();
    loop {
        let d = rem.degree_in(SYM_D3);
        if d == 0 {
            return Ok(rem.is_zero());
        }
        // the divisor is monic of degree 1 in D3, so each step strictly
        // lowers the D3-degree
        let lead = rem.coeff_of(SYM_D3, d as u16);
        let step = lead
            .mul(&ctx.sym(SYM_D3).pow(d - 1)?)?
            .mul(&divisor)?;
        rem = &rem - &step;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lca::{rank2_quadratic, virasoro};

    fn ctx() -> Context {
        Context::standard(&["k"])
    }

    #[test]
    fn skew_checks() {
        let c = ctx();
        let alg = Arc::new(rank2_quadratic(&c));
        // a⊗b − b⊗a is skew
        let mut coeffs = vec![vec![c.zero(); 2]; 2];
        coeffs[0][1] = c.one();
        coeffs[1][0] = c.int(-1);
        let r = Tensor2::new(&alg, coeffs).unwrap();
        assert!(r.is_skew("r").passed());

        // a⊗a is not
        let vir = Arc::new(virasoro(&c));
        let r = Tensor2::new(&vir, vec![vec![c.one()]]).unwrap();
        assert!(!r.is_skew("r").passed());
    }

    #[test]
    fn r_sharp0_constant_tensor() {
        let c = ctx();
        let alg = Arc::new(rank2_quadratic(&c));
        let mut coeffs = vec![vec![c.zero(); 2]; 2];
        coeffs[0][1] = c.one();
        coeffs[1][0] = c.int(-1);
        let r = Tensor2::new(&alg, coeffs).unwrap();
        let t = r.r_sharp0().unwrap();
        // r♯₀(a') = b, r♯₀(b') = −a
        assert_eq!(t.mat[0][1], c.one());
        assert!(t.mat[0][0].is_zero());
        assert_eq!(t.mat[1][0], c.int(-1));
    }

    #[test]
    fn r_sharp0_with_slot_derivations() {
        // rank 1 with R[1][1] = D1 − D2: r♯₀(a') = (−∂−∂)a = −2∂a
        let c = ctx();
        let vir = Arc::new(virasoro(&c));
        let r = Tensor2::new(
            &vir,
            vec![vec![&c.sym(SYM_D1) - &c.sym(SYM_D2)]],
        )
        .unwrap();
        let t = r.r_sharp0().unwrap();
        assert_eq!(t.mat[0][0], c.d().scale_int(-2));
        assert!(!r.is_lambda_constant().unwrap());
    }

    #[test]
    fn zero_tensor_solves_cybe() {
        let c = ctx();
        let vir = Arc::new(virasoro(&c));
        let r = Tensor2::zero(&vir);
        assert!(cybe_check(&r, "0").unwrap().passed());
    }

    #[test]
    fn a_tensor_a_fails_on_virasoro() {
        let c = ctx();
        let vir = Arc::new(virasoro(&c));
        let r = Tensor2::new(&vir, vec![vec![c.one()]]).unwrap();
        let report = cybe_check(&r, "a⊗a").unwrap();
        assert!(!report.passed());
    }

    #[test]
    fn divisibility_oracle_matches_substitution() {
        let c = ctx();
        let x = c.sym(SYM_D1);
        let y = c.sym(SYM_D2);
        let z = c.sym(SYM_D3);
        let diag = &(&x + &y) + &z;
        let multiple = diag.mul(&(&x.pow(2).unwrap() + &z)).unwrap();
        assert!(divisible_by_diagonal(&multiple).unwrap());
        let sub = multiple.subst_sym(SYM_D3, &(-&(&x + &y))).unwrap();
        assert!(sub.is_zero());

        let not_multiple = &multiple + &y;
        assert!(!divisible_by_diagonal(&not_multiple).unwrap());
        let sub = not_multiple.subst_sym(SYM_D3, &(-&(&x + &y))).unwrap();
        assert!(!sub.is_zero());
    }
}
