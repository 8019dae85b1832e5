//! Lie conformal algebras as structure-constant tables, the sesquilinear
//! evaluation calculus, axiom verification, constructors, and the coboundary
//! operator in degrees 1 and 2.
//!
//! The table `P[i][j][k](λ,∂)` encodes `[e_i λ e_j] = Σ_k P[i][j][k](λ,∂) e_k`.
//! Everything reduces to one evaluation primitive: for a bracket at spectral
//! value ν, the left argument's coefficients see `∂ → −ν`, the right
//! argument's see `∂ → ν + ∂`, and the table sees `λ → ν`. Vanishing of the
//! axioms on generators implies vanishing everywhere because every axiom is
//! sesquilinear in each argument.

use crate::freemod::{CdHom, CdModule, ElemPoly, ModuleError};
use crate::parallel::indexed_map;
use crate::poly::{Context, PolyError, ScalarPoly, SymbolKind, SYM_D, SYM_L};
use crate::report::{CheckItem, Report};
use crate::rep::RepStructure;
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error)]
pub enum LcaError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("entry [{i},{j}] conflicts with the value required by skew-symmetry")]
    SkewConflict { i: usize, j: usize },
    #[error("bracket table entry [{i},{j}] uses symbol {symbol}; only D, L and parameters are allowed")]
    ForbiddenSymbol { i: usize, j: usize, symbol: String },
    #[error("structure is not verified: {0}")]
    Unverified(String),
    #[error("input is not a Lie algebra: {0}")]
    NotLie(String),
    #[error("cochain table fails {0} at construction")]
    CochainInvalid(String),
    #[error("coboundary is implemented for cochain degrees 1 and 2 only")]
    UnsupportedDegree,
    #[error("module mismatch")]
    ModuleMismatch,
}

/// A finite Lie conformal algebra given by its λ-bracket table on a free
/// ℂ[∂]-module.
#[derive(Clone)]
pub struct LcaStructure {
    ctx: Context,
    module: Arc<CdModule>,
    table: Vec<Vec<Vec<ScalarPoly>>>,
    verified: bool,
}

impl std::fmt::Debug for LcaStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "LcaStructure rank {} {{", self.rank())?;
        for i in 0..self.rank() {
            for j in 0..self.rank() {
                let e = ElemPoly::from_coeffs(&self.module, self.table[i][j].clone());
                if !e.is_zero() {
                    writeln!(
                        f,
                        "  [{} L {}] = {:?}",
                        self.module.basis[i], self.module.basis[j], e
                    )?;
                }
            }
        }
        write!(f, "}}")
    }
}

fn validate_bracket_entry(
    ctx: &Context,
    i: usize,
    j: usize,
    coeffs: &[ScalarPoly],
) -> Result<(), LcaError> {
    for p in coeffs {
        for idx in p.support() {
            let ok = idx == SYM_D || idx == SYM_L || ctx.kind(idx) == SymbolKind::Param;
            if !ok {
                return Err(LcaError::ForbiddenSymbol {
                    i,
                    j,
                    symbol: ctx.name(idx).to_string(),
                });
            }
        }
    }
    Ok(())
}

/// `p(λ,∂) ↦ −p(−λ−∂, ∂)`: the value forced for `[e_j λ e_i]` by skew-symmetry.
fn skew_partner(ctx: &Context, coeffs: &[ScalarPoly]) -> Result<Vec<ScalarPoly>, PolyError> {
    let shift = -&(&ctx.l() + &ctx.d());
    coeffs
        .iter()
        .map(|p| Ok(-&p.subst_sym(SYM_L, &shift)?))
        .collect()
}

impl LcaStructure {
    /// Build from explicit entries; missing `[j,i]` (j > i) entries are
    /// synthesized from skew-symmetry, explicit redundant entries must agree.
    pub fn from_entries(
        ctx: &Context,
        module: &Arc<CdModule>,
        entries: Vec<((usize, usize), Vec<ScalarPoly>)>,
    ) -> Result<LcaStructure, LcaError> {
        let n = module.rank();
        let mut table: Vec<Vec<Option<Vec<ScalarPoly>>>> = vec![vec![None; n]; n];
        for ((i, j), coeffs) in entries {
            assert!(i < n && j < n, "basis index out of range");
            assert_eq!(coeffs.len(), n, "entry [{i},{j}] length");
            validate_bracket_entry(ctx, i, j, &coeffs)?;
            table[i][j] = Some(coeffs);
        }
        // synthesize the missing triangle
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if let (Some(given), None) = (&table[i][j], &table[j][i]) {
                    table[j][i] = Some(skew_partner(ctx, given)?);
                }
            }
        }
        // explicit redundancies must agree with skew-symmetry
        for i in 0..n {
            for j in (i + 1)..n {
                if let (Some(a), Some(b)) = (&table[i][j], &table[j][i]) {
                    let expect = skew_partner(ctx, a)?;
                    if expect != *b {
                        return Err(LcaError::SkewConflict { i: j, j: i });
                    }
                }
            }
        }
        let table = table
            .into_iter()
            .map(|row| {
                row.into_iter()
                    .map(|e| e.unwrap_or_else(|| vec![ctx.zero(); n]))
                    .collect()
            })
            .collect();
        Ok(LcaStructure {
            ctx: ctx.clone(),
            module: module.clone(),
            table,
            verified: false,
        })
    }

    /// Build from a complete table without skew synthesis (used by the
    /// deformation and semidirect constructors, which compute all entries).
    pub(crate) fn from_full_table(
        ctx: &Context,
        module: &Arc<CdModule>,
        table: Vec<Vec<Vec<ScalarPoly>>>,
    ) -> LcaStructure {
        LcaStructure {
            ctx: ctx.clone(),
            module: module.clone(),
            table,
            verified: false,
        }
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn module(&self) -> &Arc<CdModule> {
        &self.module
    }

    pub fn rank(&self) -> usize {
        self.module.rank()
    }

    pub fn table(&self) -> &Vec<Vec<Vec<ScalarPoly>>> {
        &self.table
    }

    pub fn entry(&self, i: usize, j: usize) -> ElemPoly {
        ElemPoly::from_coeffs(&self.module, self.table[i][j].clone())
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn ensure_verified(&self) -> Result<(), LcaError> {
        if self.verified {
            Ok(())
        } else {
            Err(LcaError::Unverified("algebra".into()))
        }
    }

    /// Runs the axiom checker and sets the verified flag on success.
    pub fn verify(mut self) -> Result<LcaStructure, Box<Report>> {
        let report = self.check_axioms("algebra");
        if report.passed() {
            self.verified = true;
            Ok(self)
        } else {
            Err(Box::new(report))
        }
    }

    /// Same table over an extended context.
    pub fn lift_to(&self, ctx: &Context) -> Result<LcaStructure, PolyError> {
        let table = self
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|e| e.iter().map(|p| p.lift_to(ctx)).collect())
                    .collect::<Result<_, _>>()
            })
            .collect::<Result<_, _>>()?;
        Ok(LcaStructure {
            ctx: ctx.clone(),
            module: self.module.clone(),
            table,
            verified: self.verified,
        })
    }

    /// The evaluation primitive: bracket of two element-valued polynomials at
    /// spectral value ν (which may itself be a polynomial, e.g. `−λ−∂` or
    /// `λ+μ`). Left coefficients see `∂ → −ν`, right coefficients
    /// `∂ → ν + ∂`, the table `λ → ν`.
    pub fn bracket_at(
        &self,
        x: &ElemPoly,
        y: &ElemPoly,
        nu: &ScalarPoly,
    ) -> Result<ElemPoly, LcaError> {
        if x.module != self.module || y.module != self.module {
            return Err(LcaError::ModuleMismatch);
        }
        let xs = x.twist_deriv(&(-nu))?;
        let ys = y.twist_deriv(&(nu + &self.ctx.d()))?;
        let mut out = ElemPoly::zero(&self.ctx, &self.module);
        for (i, xc) in xs.coeffs.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            for (j, yc) in ys.coeffs.iter().enumerate() {
                if yc.is_zero() {
                    continue;
                }
                let factor = xc.mul(yc)?;
                for (k, p) in self.table[i][j].iter().enumerate() {
                    if p.is_zero() {
                        continue;
                    }
                    let p_at = p.subst_sym(SYM_L, nu)?;
                    out.coeffs[k] = &out.coeffs[k] + &factor.mul(&p_at)?;
                }
            }
        }
        Ok(out)
    }

    /// `[x λ y]` at the symbolic spectral parameter λ.
    pub fn bracket(&self, x: &ElemPoly, y: &ElemPoly) -> Result<ElemPoly, LcaError> {
        self.bracket_at(x, y, &self.ctx.l())
    }

    /// The bracket at `λ := −λ−∂`: evaluate `[x λ y]` then substitute.
    pub fn bracket_shifted(&self, x: &ElemPoly, y: &ElemPoly) -> Result<ElemPoly, LcaError> {
        let v = self.bracket(x, y)?;
        Ok(v.subst_sym(SYM_L, &(-&(&self.ctx.l() + &self.ctx.d())))?)
    }

    pub fn basis_elem(&self, i: usize) -> ElemPoly {
        ElemPoly::basis(&self.ctx, &self.module, i)
    }

    /// Verifies skew-symmetry on all generator pairs and the Jacobi identity
    /// on all generator triples, reporting each residual polynomial.
    pub fn check_axioms(&self, subject: &str) -> Report {
        let n = self.rank();
        let ctx = &self.ctx;
        let mut report = Report::new("lca-axioms", subject);

        // skew-symmetry: P[i][j][k](λ,∂) + P[j][i][k](−λ−∂,∂) = 0, i ≤ j
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|i| (i..n).map(move |j| (i, j)))
            .collect();
        let skew_items = indexed_map(pairs.len(), |idx| {
            let (i, j) = pairs[idx];
            let partner = skew_partner(ctx, &self.table[j][i]).expect("skew substitution");
            let residuals = (0..n)
                .map(|k| {
                    (
                        self.module.basis[k].clone(),
                        &self.table[i][j][k] - &partner[k],
                    )
                })
                .collect();
            CheckItem::residual(
                format!("skew ({},{})", self.module.basis[i], self.module.basis[j]),
                residuals,
            )
        });
        for item in skew_items {
            report.push(item);
        }

        // Jacobi: [e_i λ [e_j μ e_k]] − [e_j μ [e_i λ e_k]] − [[e_i λ e_j]_{λ+μ} e_k]
        let triples: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..n).map(move |k| (i, j, k))))
            .collect();
        let lam = ctx.l();
        let mu = ctx.m();
        let lam_mu = &lam + &mu;
        let jac_items = indexed_map(triples.len(), |idx| {
            let (i, j, k) = triples[idx];
            let residual = self.jacobi_residual(i, j, k, &lam, &mu, &lam_mu);
            match residual {
                Ok(r) => CheckItem::residual(
                    format!(
                        "jacobi ({},{},{})",
                        self.module.basis[i], self.module.basis[j], self.module.basis[k]
                    ),
                    r.coeffs
                        .iter()
                        .enumerate()
                        .map(|(c, p)| (self.module.basis[c].clone(), p.clone()))
                        .collect(),
                ),
                Err(e) => {
                    let mut item = CheckItem::flag(format!("jacobi ({i},{j},{k})"), false);
                    item.location = format!("{} [{}]", item.location, e);
                    item
                }
            }
        });
        for item in jac_items {
            report.push(item);
        }
        report
    }

    fn jacobi_residual(
        &self,
        i: usize,
        j: usize,
        k: usize,
        lam: &ScalarPoly,
        mu: &ScalarPoly,
        lam_mu: &ScalarPoly,
    ) -> Result<ElemPoly, LcaError> {
        let ei = self.basis_elem(i);
        let ej = self.basis_elem(j);
        let ek = self.basis_elem(k);
        let inner_jk = self.bracket_at(&ej, &ek, mu)?;
        let t1 = self.bracket_at(&ei, &inner_jk, lam)?;
        let inner_ik = self.bracket_at(&ei, &ek, lam)?;
        let t2 = self.bracket_at(&ej, &inner_ik, mu)?;
        let inner_ij = self.bracket_at(&ei, &ej, lam)?;
        let t3 = self.bracket_at(&inner_ij, &ek, lam_mu)?;
        Ok(&(&t1 - &t2) - &t3)
    }
}

/// The current Lie conformal algebra of a finite-dimensional Lie algebra:
/// constant structure table. The Lie axioms of the input are checked first.
pub fn current(
    ctx: &Context,
    basis: Vec<String>,
    consts: &[Vec<Vec<ScalarPoly>>],
) -> Result<LcaStructure, LcaError> {
    let n = basis.len();
    assert_eq!(consts.len(), n, "structure constant shape");
    // antisymmetry and Jacobi over the scalar ring
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let anti = &consts[i][j][k] + &consts[j][i][k];
                if !anti.is_zero() {
                    return Err(LcaError::NotLie(format!(
                        "antisymmetry fails at ({i},{j}): {anti}"
                    )));
                }
            }
        }
    }
    let lie_mul = |a: usize, b: usize| -> &Vec<ScalarPoly> { &consts[a][b] };
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                // [[i,j],k] + [[j,k],i] + [[k,i],j] componentwise
                let mut residual = vec![ctx.zero(); n];
                for m in 0..n {
                    for (r, out) in residual.iter_mut().enumerate() {
                        *out = &*out + &lie_mul(i, j)[m].mul(&consts[m][k][r])?;
                        *out = &*out + &lie_mul(j, k)[m].mul(&consts[m][i][r])?;
                        *out = &*out + &lie_mul(k, i)[m].mul(&consts[m][j][r])?;
                    }
                }
                if residual.iter().any(|p| !p.is_zero()) {
                    let shown = residual
                        .iter()
                        .map(|p| p.to_string())
                        .collect::<Vec<_>>()
                        .join(", ");
                    return Err(LcaError::NotLie(format!(
                        "Jacobi fails at ({i},{j},{k}): [{shown}]"
                    )));
                }
            }
        }
    }
    let module = CdModule::new(basis);
    let table = consts.to_vec();
    LcaStructure::from_full_table(ctx, &module, table)
        .verify()
        .map_err(|r| LcaError::NotLie(format!("current table fails conformal axioms: {r}")))
}

/// Semidirect product `A ⋉_ρ V`: `[a λ v] = ρ(a)_λ v`, `[v λ a] = −ρ(a)_{−λ−∂} v`,
/// `[v λ v] = 0`. Requires a verified module; the result is re-verified.
pub fn semidirect(l: &LcaStructure, r: &RepStructure) -> Result<LcaStructure, LcaError> {
    r.ensure_verified()
        .map_err(|_| LcaError::Unverified("module (run check_rep_axioms first)".into()))?;
    assert!(
        Arc::ptr_eq(r.algebra_module(), l.module()) || r.algebra_module() == l.module(),
        "representation is over a different algebra"
    );
    let ctx = l.ctx();
    let n = l.rank();
    let m = r.module().rank();
    let mut basis = l.module().basis.clone();
    // module basis names that collide with algebra names get a suffix
    let taken: std::collections::BTreeSet<String> = basis.iter().cloned().collect();
    for name in &r.module().basis {
        let mut candidate = name.clone();
        while taken.contains(&candidate) || basis.contains(&candidate) {
            candidate.push_str("_v");
        }
        basis.push(candidate);
    }
    let module = CdModule::new(basis);
    let zero_row = || vec![ctx.zero(); n + m];
    let mut table = vec![vec![zero_row(); n + m]; n + m];
    let shift = -&(&ctx.l() + &ctx.d());
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                table[i][j][k] = l.table()[i][j][k].clone();
            }
        }
        for j in 0..m {
            for k in 0..m {
                table[i][n + j][n + k] = r.table()[i][j][k].clone();
                // [v_j λ e_i] = −ρ(e_i)_{−λ−∂} v_j
                table[n + j][i][n + k] = -&r.table()[i][j][k].subst_sym(SYM_L, &shift)?;
            }
        }
    }
    let out = LcaStructure::from_full_table(ctx, &module, table);
    out.verify()
        .map_err(|rep| LcaError::NotLie(format!("semidirect table fails axioms: {rep}")))
}

/// The deformed bracket `{a λ b}_N = [N(a) λ b] + [a λ N(b)] − N[a λ b]` as a
/// structure table. `N` is not assumed Nijenhuis; the output is unverified.
pub fn deformed_bracket(l: &LcaStructure, n_hom: &CdHom) -> Result<LcaStructure, LcaError> {
    assert_eq!(
        n_hom.source, n_hom.target,
        "deformation operator must be an endomorphism"
    );
    if n_hom.source != *l.module() {
        return Err(LcaError::ModuleMismatch);
    }
    let table = deformed_table(l, n_hom)?;
    Ok(LcaStructure::from_full_table(l.ctx(), l.module(), table))
}

pub(crate) fn deformed_table(
    l: &LcaStructure,
    n_hom: &CdHom,
) -> Result<Vec<Vec<Vec<ScalarPoly>>>, LcaError> {
    let n = l.rank();
    let mut table = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let v = deformed_pair(l, n_hom, i, j)?;
            table[i][j] = v.coeffs;
        }
    }
    Ok(table)
}

fn deformed_pair(
    l: &LcaStructure,
    n_hom: &CdHom,
    i: usize,
    j: usize,
) -> Result<ElemPoly, LcaError> {
    let ei = l.basis_elem(i);
    let ej = l.basis_elem(j);
    let nei = n_hom.apply(&ei)?;
    let nej = n_hom.apply(&ej)?;
    let t1 = l.bracket(&nei, &ej)?;
    let t2 = l.bracket(&ei, &nej)?;
    let t3 = n_hom.apply(&l.bracket(&ei, &ej)?)?;
    Ok(&(&t1 + &t2) - &t3)
}

// ---------------------------------------------------------------------------
// 2-cochains and the coboundary operator (degrees 1 and 2)
// ---------------------------------------------------------------------------

/// Coefficient module of a cochain.
#[derive(Clone)]
pub enum CochainCoeffs {
    /// Coefficients in the adjoint module.
    Adjoint,
    /// Coefficients in a verified module.
    Rep(Arc<RepStructure>),
}

/// A 2-λ-bracket on the algebra with coefficients in the adjoint or a module.
/// Sesquilinearity is built into the evaluation rule; skew-symmetry with
/// `λ₂ ↦ −λ₁−∂` is checked at construction.
#[derive(Clone)]
pub struct Cochain2 {
    pub algebra: Arc<LcaStructure>,
    pub coeffs: CochainCoeffs,
    /// `table[i][j]`: value of `{e_i λ e_j}` over the coefficient module.
    pub table: Vec<Vec<Vec<ScalarPoly>>>,
}

impl Cochain2 {
    fn value_module(&self) -> Arc<CdModule> {
        match &self.coeffs {
            CochainCoeffs::Adjoint => self.algebra.module().clone(),
            CochainCoeffs::Rep(r) => r.module().clone(),
        }
    }

    pub fn new(
        algebra: &Arc<LcaStructure>,
        coeffs: CochainCoeffs,
        table: Vec<Vec<Vec<ScalarPoly>>>,
    ) -> Result<Cochain2, LcaError> {
        let c = Cochain2 {
            algebra: algebra.clone(),
            coeffs,
            table,
        };
        let ctx = c.algebra.ctx();
        let n = c.algebra.rank();
        // sesquilinearity is the evaluation rule; entries may only use D, L, params
        for i in 0..n {
            for j in 0..n {
                validate_bracket_entry(ctx, i, j, &c.table[i][j])
                    .map_err(|_| LcaError::CochainInvalid("sesquilinearity".into()))?;
            }
        }
        // skew-symmetry with λ ↦ −λ−∂
        for i in 0..n {
            for j in 0..n {
                let partner = skew_partner(ctx, &c.table[j][i])?;
                for (k, p) in c.table[i][j].iter().enumerate() {
                    if (p - &partner[k]).is_zero() {
                        continue;
                    }
                    return Err(LcaError::CochainInvalid("skew-symmetry".into()));
                }
            }
        }
        Ok(c)
    }

    /// Cochain evaluation at spectral value ν with the same sesquilinear
    /// twists as a bracket.
    pub fn eval_at(
        &self,
        x: &ElemPoly,
        y: &ElemPoly,
        nu: &ScalarPoly,
    ) -> Result<ElemPoly, LcaError> {
        let ctx = self.algebra.ctx();
        let out_mod = self.value_module();
        let xs = x.twist_deriv(&(-nu))?;
        let ys = y.twist_deriv(&(nu + &ctx.d()))?;
        let mut out = ElemPoly::zero(ctx, &out_mod);
        for (i, xc) in xs.coeffs.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            for (j, yc) in ys.coeffs.iter().enumerate() {
                if yc.is_zero() {
                    continue;
                }
                let factor = xc.mul(yc)?;
                for (k, p) in self.table[i][j].iter().enumerate() {
                    if p.is_zero() {
                        continue;
                    }
                    out.coeffs[k] = &out.coeffs[k] + &factor.mul(&p.subst_sym(SYM_L, nu)?)?;
                }
            }
        }
        Ok(out)
    }

    /// Module action of `x` on a cochain value at spectral ν. For adjoint
    /// coefficients this is the bracket.
    fn act(&self, x: &ElemPoly, v: &ElemPoly, nu: &ScalarPoly) -> Result<ElemPoly, LcaError> {
        match &self.coeffs {
            CochainCoeffs::Adjoint => self.algebra.bracket_at(x, v, nu),
            CochainCoeffs::Rep(r) => Ok(r.act_elem(x, v, nu)?),
        }
    }
}

/// Coboundary of a 1-cochain (a ℂ[∂]-hom `N: A → V`):
/// `{a λ b}_{dN} = ρ(a)_λ N(b) − ρ(b)_{−λ−∂} N(a) − N([a λ b])`.
/// With adjoint coefficients this is the deformed-bracket table.
pub fn coboundary_1(
    algebra: &Arc<LcaStructure>,
    coeffs: CochainCoeffs,
    n_hom: &CdHom,
) -> Result<Cochain2, LcaError> {
    let ctx = algebra.ctx();
    let n = algebra.rank();
    let lam = ctx.l();
    let shift = -&(&lam + &ctx.d());
    let helper = Cochain2 {
        algebra: algebra.clone(),
        coeffs: coeffs.clone(),
        table: vec![vec![vec![]; n]; n],
    };
    let mut table = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let ei = algebra.basis_elem(i);
            let ej = algebra.basis_elem(j);
            let t1 = helper.act(&ei, &n_hom.apply(&ej)?, &lam)?;
            let t2 = helper.act(&ej, &n_hom.apply(&ei)?, &shift)?;
            let t3 = n_hom.apply(&algebra.bracket(&ei, &ej)?)?;
            table[i][j] = (&(&t1 - &t2) - &t3).coeffs;
        }
    }
    Cochain2::new(algebra, coeffs, table)
}

/// Coboundary of a 2-cochain: the degree-3 table indexed by generator
/// triples, with `λ₃ ↦ −λ₁−λ₂−∂` already substituted. Components are
/// polynomials in (λ, μ, ∂) over the coefficient module.
pub fn coboundary_2(c: &Cochain2) -> Result<Vec<Vec<Vec<ElemPoly>>>, LcaError> {
    let algebra = &c.algebra;
    let ctx = algebra.ctx();
    let n = algebra.rank();
    let lam = ctx.l();
    let mu = ctx.m();
    let lam_mu = &lam + &mu;
    let nu3 = -&(&lam_mu + &ctx.d());
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut plane = Vec::with_capacity(n);
        for j in 0..n {
            let row = indexed_map(n, |k| {
                let ei = algebra.basis_elem(i);
                let ej = algebra.basis_elem(j);
                let ek = algebra.basis_elem(k);
                let compute = || -> Result<ElemPoly, LcaError> {
                    // a1_λ1 {a2 λ2 a3}_c − a2_λ2 {a1 λ1 a3}_c
                    let t1 = c.act(&ei, &c.eval_at(&ej, &ek, &mu)?, &lam)?;
                    let t2 = c.act(&ej, &c.eval_at(&ei, &ek, &lam)?, &mu)?;
                    // {a3_{λ3+} [a1 λ1 a2]}_c + a3_{λ3+} {a1 λ1 a2}_c
                    let br12 = algebra.bracket_at(&ei, &ej, &lam)?;
                    let t3 = c.eval_at(&ek, &br12, &nu3)?;
                    let t4 = c.act(&ek, &c.eval_at(&ei, &ej, &lam)?, &nu3)?;
                    // −{a2 λ2 [a1 λ1 a3]}_c + {a1 λ1 [a2 λ2 a3]}_c
                    let t5 = c.eval_at(&ej, &algebra.bracket_at(&ei, &ek, &lam)?, &mu)?;
                    let t6 = c.eval_at(&ei, &algebra.bracket_at(&ej, &ek, &mu)?, &lam)?;
                    Ok(&(&(&(&(&t1 - &t2) + &t3) + &t4) - &t5) + &t6)
                };
                compute()
            });
            plane.push(row.into_iter().collect::<Result<Vec<_>, _>>()?);
        }
        out.push(plane);
    }
    Ok(out)
}

/// Asserts that the coboundary of a 2-cochain vanishes identically.
pub fn check_2cocycle(c: &Cochain2, subject: &str) -> Result<Report, LcaError> {
    let image = coboundary_2(c)?;
    let basis = &c.algebra.module().basis;
    let vmod = c.value_module();
    let mut report = Report::new("2-cocycle", subject);
    for (i, plane) in image.iter().enumerate() {
        for (j, row) in plane.iter().enumerate() {
            for (k, val) in row.iter().enumerate() {
                report.push(CheckItem::residual(
                    format!("d ({},{},{})", basis[i], basis[j], basis[k]),
                    val.coeffs
                        .iter()
                        .enumerate()
                        .map(|(cix, p)| (vmod.basis[cix].clone(), p.clone()))
                        .collect(),
                ));
            }
        }
    }
    Ok(report)
}

/// Trivial-coefficient 2-cocycle residuals for a scalar table `Ω[i][j](λ)`:
/// `{e_i λ [e_j μ e_k]}_ω − {e_j μ [e_i λ e_k]}_ω − {[e_i λ e_j]_{λ+μ} e_k}_ω`,
/// with `{e_i λ p(μ,∂)e_l}_ω = p(μ,λ)·Ω[i][l](λ)` and
/// `{p(λ,∂)e_l ν e_k}_ω = p(λ,−ν)·Ω[l][k](ν)`.
pub fn two_cocycle_trivial_residuals(
    l: &LcaStructure,
    omega: &[Vec<ScalarPoly>],
    subject: &str,
) -> Result<Report, LcaError> {
    let ctx = l.ctx();
    let n = l.rank();
    let lam = ctx.l();
    let mu = ctx.m();
    let lam_mu = &lam + &mu;
    // scalar-valued form evaluation at spectral ν: left ∂ → −ν, right ∂ → ν
    let form_eval = |x: &ElemPoly, y: &ElemPoly, nu: &ScalarPoly| -> Result<ScalarPoly, LcaError> {
        let xs = x.twist_deriv(&(-nu))?;
        let ys = y.twist_deriv(nu)?;
        let mut acc = ctx.zero();
        for (i, xc) in xs.coeffs.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            for (j, yc) in ys.coeffs.iter().enumerate() {
                if yc.is_zero() || omega[i][j].is_zero() {
                    continue;
                }
                acc = &acc + &xc.mul(yc)?.mul(&omega[i][j].subst_sym(SYM_L, nu)?)?;
            }
        }
        Ok(acc)
    };
    let mut report = Report::new("2-cocycle-trivial", subject);
    let basis = &l.module().basis;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let ei = l.basis_elem(i);
                let ej = l.basis_elem(j);
                let ek = l.basis_elem(k);
                let t1 = form_eval(&ei, &l.bracket_at(&ej, &ek, &mu)?, &lam)?;
                let t2 = form_eval(&ej, &l.bracket_at(&ei, &ek, &lam)?, &mu)?;
                let t3 = form_eval(&l.bracket_at(&ei, &ej, &lam)?, &ek, &lam_mu)?;
                let residual = &(&t1 - &t2) - &t3;
                report.push(CheckItem::residual(
                    format!("cocycle ({},{},{})", basis[i], basis[j], basis[k]),
                    vec![("1".to_string(), residual)],
                ));
            }
        }
    }
    Ok(report)
}

/// The t-parameterized deformation `P + t·C` over the context extended by the
/// indeterminate `t`. Verifying the result checks the deformation equations
/// simultaneously and exactly for all t.
pub fn deform_with_parameter(
    l: &LcaStructure,
    omega: &Cochain2,
) -> Result<LcaStructure, LcaError> {
    assert!(
        matches!(omega.coeffs, CochainCoeffs::Adjoint),
        "deformation cochain must have adjoint coefficients"
    );
    assert!(
        omega.algebra.module() == l.module(),
        "cochain is over a different algebra"
    );
    let ctx_t = l.ctx().extend_params(&["t"]);
    let t = ctx_t.sym_named("t").expect("t param");
    let n = l.rank();
    let mut table = vec![vec![Vec::new(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let row: Result<Vec<ScalarPoly>, PolyError> = (0..n)
                .map(|k| {
                    let base = l.table()[i][j][k].lift_to(&ctx_t)?;
                    let c = omega.table[i][j][k].lift_to(&ctx_t)?;
                    Ok(&base + &c.mul(&t)?)
                })
                .collect();
            table[i][j] = row?;
        }
    }
    Ok(LcaStructure::from_full_table(&ctx_t, l.module(), table))
}

#[cfg(test)]
pub(crate) fn virasoro(ctx: &Context) -> LcaStructure {
    let m = CdModule::new(vec!["a".into()]);
    let entry = &ctx.d() + &ctx.l().scale_int(2);
    LcaStructure::from_entries(ctx, &m, vec![((0, 0), vec![entry])])
        .unwrap()
        .verify()
        .unwrap()
}

/// The rank-2 quadratic algebra `[a λ a]=(∂+2λ)a, [a λ b]=(∂+λ)b, [b λ b]=0`.
#[cfg(test)]
pub(crate) fn rank2_quadratic(ctx: &Context) -> LcaStructure {
    let m = CdModule::new(vec!["a".into(), "b".into()]);
    let paa = &ctx.d() + &ctx.l().scale_int(2);
    let pab = &ctx.d() + &ctx.l();
    LcaStructure::from_entries(
        ctx,
        &m,
        vec![
            ((0, 0), vec![paa, ctx.zero()]),
            ((0, 1), vec![ctx.zero(), pab]),
            ((1, 1), vec![ctx.zero(), ctx.zero()]),
        ],
    )
    .unwrap()
    .verify()
    .unwrap()
}
