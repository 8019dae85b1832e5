//! Conformal modules over a Lie conformal algebra: action tables, axiom
//! verification, adjoint/trivial/coadjoint constructions, and the deformed
//! representation.
//!
//! The table `Q[i][j][k](λ,∂)` encodes `ρ(e_i)_λ v_j = Σ_k Q[i][j][k](λ,∂) v_k`
//! with the evaluation rule `ρ(f(∂)e_i)_λ (g(∂)v_j) = f(−λ)·g(λ+∂)·ρ(e_i)_λ v_j`.

use crate::freemod::{CdHom, CdModule, ElemPoly, ModuleError};
use crate::lca::{deformed_bracket, LcaError, LcaStructure};
use crate::parallel::indexed_map;
use crate::poly::{Context, PolyError, ScalarPoly, SymbolKind, SYM_D, SYM_L};
use crate::report::{CheckItem, Report};
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error)]
pub enum RepError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Module(#[from] ModuleError),
    #[error("representation is not verified (run check_rep_axioms / verify first)")]
    Unverified,
    #[error("underlying algebra is not verified")]
    AlgebraUnverified,
    #[error("action table entry ({i},{j}) uses symbol {symbol}; only D, L and parameters are allowed")]
    ForbiddenSymbol { i: usize, j: usize, symbol: String },
    #[error("rank mismatch in action table")]
    RankMismatch,
    #[error("constructed representation fails the module axioms:\n{0}")]
    AxiomFailure(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// A finite conformal module `(V; ρ)` over a verified Lie conformal algebra.
#[derive(Clone)]
pub struct RepStructure {
    algebra: Arc<LcaStructure>,
    module: Arc<CdModule>,
    table: Vec<Vec<Vec<ScalarPoly>>>,
    verified: bool,
}

impl std::fmt::Debug for RepStructure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "RepStructure rank {} {{", self.module.rank())?;
        for i in 0..self.algebra.rank() {
            for j in 0..self.module.rank() {
                let e = ElemPoly::from_coeffs(&self.module, self.table[i][j].clone());
                if !e.is_zero() {
                    writeln!(
                        f,
                        "  {} . {} = {:?}",
                        self.algebra.module().basis[i], self.module.basis[j], e
                    )?;
                }
            }
        }
        write!(f, "}}")
    }
}

impl RepStructure {
    pub fn new(
        algebra: &Arc<LcaStructure>,
        module: &Arc<CdModule>,
        table: Vec<Vec<Vec<ScalarPoly>>>,
    ) -> Result<RepStructure, RepError> {
        let ctx = algebra.ctx();
        if table.len() != algebra.rank() {
            return Err(RepError::RankMismatch);
        }
        for (i, plane) in table.iter().enumerate() {
            if plane.len() != module.rank() {
                return Err(RepError::RankMismatch);
            }
            for (j, row) in plane.iter().enumerate() {
                if row.len() != module.rank() {
                    return Err(RepError::RankMismatch);
                }
                for p in row {
                    for idx in p.support() {
                        let ok = idx == SYM_D
                            || idx == SYM_L
                            || ctx.kind(idx) == SymbolKind::Param;
                        if !ok {
                            return Err(RepError::ForbiddenSymbol {
                                i,
                                j,
                                symbol: ctx.name(idx).to_string(),
                            });
                        }
                    }
                }
            }
        }
        Ok(RepStructure {
            algebra: algebra.clone(),
            module: module.clone(),
            table,
            verified: false,
        })
    }

    pub fn ctx(&self) -> &Context {
        self.algebra.ctx()
    }

    pub fn algebra(&self) -> &Arc<LcaStructure> {
        &self.algebra
    }

    pub fn algebra_module(&self) -> &Arc<CdModule> {
        self.algebra.module()
    }

    pub fn module(&self) -> &Arc<CdModule> {
        &self.module
    }

    pub fn table(&self) -> &Vec<Vec<Vec<ScalarPoly>>> {
        &self.table
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn ensure_verified(&self) -> Result<(), RepError> {
        if self.verified {
            Ok(())
        } else {
            Err(RepError::Unverified)
        }
    }

    pub fn verify(mut self) -> Result<RepStructure, Box<Report>> {
        let report = self.check_axioms("module");
        if report.passed() {
            self.verified = true;
            Ok(self)
        } else {
            Err(Box::new(report))
        }
    }

    pub fn basis_vector(&self, j: usize) -> ElemPoly {
        ElemPoly::basis(self.ctx(), &self.module, j)
    }

    /// `ρ(e_i)_ν v` for a module-element-valued polynomial `v`.
    pub fn act_gen(
        &self,
        i: usize,
        v: &ElemPoly,
        nu: &ScalarPoly,
    ) -> Result<ElemPoly, PolyError> {
        let ctx = self.ctx();
        let vs = v.twist_deriv(&(nu + &ctx.d()))?;
        let mut out = ElemPoly::zero(ctx, &self.module);
        for (j, vc) in vs.coeffs.iter().enumerate() {
            if vc.is_zero() {
                continue;
            }
            for (k, q) in self.table[i][j].iter().enumerate() {
                if q.is_zero() {
                    continue;
                }
                out.coeffs[k] = &out.coeffs[k] + &vc.mul(&q.subst_sym(SYM_L, nu)?)?;
            }
        }
        Ok(out)
    }

    /// `ρ(x)_ν v` extended to algebra-element-valued polynomials `x`
    /// (`ρ(p(λ,∂)e_l)_ν = p(λ,−ν)·ρ(e_l)_ν` by the evaluation rule).
    pub fn act_elem(
        &self,
        x: &ElemPoly,
        v: &ElemPoly,
        nu: &ScalarPoly,
    ) -> Result<ElemPoly, PolyError> {
        let ctx = self.ctx();
        let xs = x.twist_deriv(&(-nu))?;
        let mut out = ElemPoly::zero(ctx, &self.module);
        for (i, xc) in xs.coeffs.iter().enumerate() {
            if xc.is_zero() {
                continue;
            }
            let acted = self.act_gen(i, v, nu)?;
            out = &out + &acted.scale(xc)?;
        }
        Ok(out)
    }

    /// Verifies `ρ([e_i λ e_j])_{λ+μ} v_k = ρ(e_i)_λ ρ(e_j)_μ v_k − ρ(e_j)_μ ρ(e_i)_λ v_k`
    /// on all generator pairs and module generators.
    pub fn check_axioms(&self, subject: &str) -> Report {
        let ctx = self.ctx();
        let n = self.algebra.rank();
        let m = self.module.rank();
        let lam = ctx.l();
        let mu = ctx.m();
        let lam_mu = &lam + &mu;
        let mut report = Report::new("rep-axioms", subject);
        if !self.algebra.is_verified() {
            report.mark_error("underlying algebra is not verified");
            return report;
        }
        let idxs: Vec<(usize, usize, usize)> = (0..n)
            .flat_map(|i| (0..n).flat_map(move |j| (0..m).map(move |k| (i, j, k))))
            .collect();
        let items = indexed_map(idxs.len(), |t| {
            let (i, j, k) = idxs[t];
            let compute = || -> Result<ElemPoly, LcaError> {
                let ei = self.algebra.basis_elem(i);
                let ej = self.algebra.basis_elem(j);
                let vk = self.basis_vector(k);
                let br = self.algebra.bracket_at(&ei, &ej, &lam)?;
                let t1 = self.act_elem(&br, &vk, &lam_mu)?;
                let t2 = self.act_gen(i, &self.act_gen(j, &vk, &mu)?, &lam)?;
                let t3 = self.act_gen(j, &self.act_gen(i, &vk, &lam)?, &mu)?;
                Ok(&(&t1 - &t2) + &t3)
            };
            let loc = format!(
                "module ({},{},{})",
                self.algebra.module().basis[i],
                self.algebra.module().basis[j],
                self.module.basis[k]
            );
            match compute() {
                Ok(r) => CheckItem::residual(
                    loc,
                    r.coeffs
                        .iter()
                        .enumerate()
                        .map(|(c, p)| (self.module.basis[c].clone(), p.clone()))
                        .collect(),
                ),
                Err(e) => CheckItem::flag(format!("{loc} [{e}]"), false),
            }
        });
        for item in items {
            report.push(item);
        }
        report
    }
}

/// The adjoint module `(A; ad)`: action table equal to the bracket table.
pub fn adjoint(algebra: &Arc<LcaStructure>) -> Result<RepStructure, RepError> {
    if !algebra.is_verified() {
        return Err(RepError::AlgebraUnverified);
    }
    let rep = RepStructure::new(algebra, algebra.module(), algebra.table().clone())?;
    rep.verify()
        .map_err(|r| RepError::AxiomFailure(r.to_string()))
}

/// The trivial module of rank `m` (zero action).
pub fn trivial(algebra: &Arc<LcaStructure>, m: usize) -> Result<RepStructure, RepError> {
    if !algebra.is_verified() {
        return Err(RepError::AlgebraUnverified);
    }
    let ctx = algebra.ctx();
    let module = CdModule::with_rank("v", m);
    let table = vec![vec![vec![ctx.zero(); m]; m]; algebra.rank()];
    let rep = RepStructure::new(algebra, &module, table)?;
    rep.verify()
        .map_err(|r| RepError::AxiomFailure(r.to_string()))
}

/// The coadjoint-style dual of a module: on generators
/// `ρ*(e_i)_λ v_j' = Σ_k [−Q[i][k][j](λ, −λ−∂)] v_k'`.
pub fn coadjoint(r: &RepStructure) -> Result<RepStructure, RepError> {
    r.ensure_verified()?;
    let ctx = r.ctx();
    let m = r.module().rank();
    let dual = r.module().dual();
    let shift = -&(&ctx.l() + &ctx.d());
    let mut table = vec![vec![vec![ctx.zero(); m]; m]; r.algebra().rank()];
    for i in 0..r.algebra().rank() {
        for j in 0..m {
            for k in 0..m {
                table[i][j][k] = -&r.table()[i][k][j].subst_sym(SYM_D, &shift)?;
            }
        }
    }
    let rep = RepStructure::new(r.algebra(), &dual, table)?;
    rep.verify()
        .map_err(|rep| RepError::AxiomFailure(rep.to_string()))
}

/// Table of the deformed representation
/// `ρ̃(a)_λ v = ρ(Na)_λ v − ρ(a)_λ S(v) + S(ρ(a)_λ v)` on generators.
pub(crate) fn deformed_rep_table(
    r: &RepStructure,
    n_hom: &CdHom,
    s_hom: &CdHom,
) -> Result<Vec<Vec<Vec<ScalarPoly>>>, RepError> {
    let ctx = r.ctx();
    let lam = ctx.l();
    let n = r.algebra().rank();
    let m = r.module().rank();
    let mut table = vec![vec![Vec::new(); m]; n];
    for i in 0..n {
        let ei = r.algebra().basis_elem(i);
        let nei = n_hom.apply(&ei)?;
        for j in 0..m {
            let vj = r.basis_vector(j);
            let t1 = r.act_elem(&nei, &vj, &lam)?;
            let t2 = r.act_gen(i, &s_hom.apply(&vj)?, &lam)?;
            let t3 = s_hom.apply(&r.act_gen(i, &vj, &lam)?)?;
            table[i][j] = (&(&t1 - &t2) + &t3).coeffs;
        }
    }
    Ok(table)
}

/// Table of `ϖ(a)_μ v = ρ(Na)_μ v + ρ(a)_μ S(v) − S(ρ(a)_μ v)`, the
/// representation direction of a trivial infinitesimal deformation.
pub(crate) fn varpi_table(
    r: &RepStructure,
    n_hom: &CdHom,
    s_hom: &CdHom,
) -> Result<Vec<Vec<Vec<ScalarPoly>>>, RepError> {
    let ctx = r.ctx();
    let lam = ctx.l();
    let n = r.algebra().rank();
    let m = r.module().rank();
    let mut table = vec![vec![Vec::new(); m]; n];
    for i in 0..n {
        let ei = r.algebra().basis_elem(i);
        let nei = n_hom.apply(&ei)?;
        for j in 0..m {
            let vj = r.basis_vector(j);
            let t1 = r.act_elem(&nei, &vj, &lam)?;
            let t2 = r.act_gen(i, &s_hom.apply(&vj)?, &lam)?;
            let t3 = s_hom.apply(&r.act_gen(i, &vj, &lam)?)?;
            table[i][j] = (&(&t1 + &t2) - &t3).coeffs;
        }
    }
    Ok(table)
}

/// The deformed representation ρ̃ as a verified module over the deformed
/// algebra `(A, [·λ·]_N)`. Requires `(N,S)` to be a Nijenhuis structure.
pub fn deformed_rep(
    r: &RepStructure,
    n_hom: &CdHom,
    s_hom: &CdHom,
) -> Result<RepStructure, RepError> {
    let structure = crate::nijenhuis::check_nijenhuis_structure(r.algebra(), r, n_hom, s_hom)
        .map_err(|e| RepError::Precondition(e.to_string()))?;
    if !structure.passed() {
        return Err(RepError::Precondition(format!(
            "(N,S) is not a Nijenhuis structure:\n{structure}"
        )));
    }
    let deformed = deformed_bracket(r.algebra(), n_hom)
        .map_err(|e| RepError::Precondition(e.to_string()))?
        .verify()
        .map_err(|rep| RepError::AxiomFailure(rep.to_string()))?;
    let table = deformed_rep_table(r, n_hom, s_hom)?;
    let rep = RepStructure::new(&Arc::new(deformed), r.module(), table)?;
    rep.verify()
        .map_err(|rep| RepError::AxiomFailure(rep.to_string()))
}
