//! 2-forms, symplectic structures, symplectic-Nijenhuis structures, and the
//! bridges to O-operators and ON-structures.
//!
//! A 2-form is a table `Ω[i][j](λ)` with the evaluation rule
//! `{f(∂)e_i λ g(∂)e_j}_ω = f(−λ)·g(λ)·Ω[i][j](λ)`; skew-symmetry
//! `Ω[i][j](λ) = −Ω[j][i](λ)` is checked at construction. Non-degeneracy
//! means ω♮ is a ℂ[∂]-module isomorphism, i.e. its determinant is a unit —
//! not merely nonzero.

use crate::freemod::{CdHom, ModuleError};
use crate::lca::{two_cocycle_trivial_residuals, LcaError, LcaStructure};
use crate::nijenhuis::check_nijenhuis_operator;
use crate::ooperator::{check_o_operator, check_on_structure, OOperatorError};
use crate::poly::{Context, PolyError, ScalarPoly, SymbolKind, SYM_D, SYM_L};
use crate::rep::{adjoint, coadjoint, RepError, RepStructure};
use crate::report::{CheckItem, Report, Verdict};
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error)]
pub enum SymplecticError {
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
    #[error("2-form entry ({i},{j}) uses symbol {symbol}; only L and parameters are allowed")]
    ForbiddenSymbol { i: usize, j: usize, symbol: String },
    #[error("2-form table is not skew-symmetric at ({i},{j})")]
    NotSkew { i: usize, j: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// A 2-form on a finite Lie conformal algebra.
#[derive(Clone)]
pub struct TwoForm {
    algebra: Arc<LcaStructure>,
    /// `table[i][j](λ)`.
    table: Vec<Vec<ScalarPoly>>,
}

impl std::fmt::Debug for TwoForm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let basis = &self.algebra.module().basis;
        writeln!(f, "TwoForm {{")?;
        for (i, row) in self.table.iter().enumerate() {
            for (j, p) in row.iter().enumerate() {
                if !p.is_zero() {
                    writeln!(f, "  ({},{}) = {}", basis[i], basis[j], p)?;
                }
            }
        }
        write!(f, "}}")
    }
}

impl TwoForm {
    pub fn new(
        algebra: &Arc<LcaStructure>,
        table: Vec<Vec<ScalarPoly>>,
    ) -> Result<TwoForm, SymplecticError> {
        let n = algebra.rank();
        let ctx = algebra.ctx();
        assert_eq!(table.len(), n, "2-form shape");
        for (i, row) in table.iter().enumerate() {
            assert_eq!(row.len(), n, "2-form shape");
            for (j, p) in row.iter().enumerate() {
                for idx in p.support() {
                    let ok = idx == SYM_L || ctx.kind(idx) == SymbolKind::Param;
                    if !ok {
                        return Err(SymplecticError::ForbiddenSymbol {
                            i,
                            j,
                            symbol: ctx.name(idx).to_string(),
                        });
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if !(&table[i][j] + &table[j][i]).is_zero() {
                    return Err(SymplecticError::NotSkew { i, j });
                }
            }
        }
        Ok(TwoForm {
            algebra: algebra.clone(),
            table,
        })
    }

    pub fn algebra(&self) -> &Arc<LcaStructure> {
        &self.algebra
    }

    pub fn table(&self) -> &Vec<Vec<ScalarPoly>> {
        &self.table
    }

    pub fn ctx(&self) -> &Context {
        self.algebra.ctx()
    }

    /// `ω♮ : A → A*^c` with matrix `H[i][j](∂) = Ω[i][j](−∂)`.
    pub fn omega_natural(&self) -> Result<CdHom, SymplecticError> {
        let ctx = self.ctx();
        let minus_d = -&ctx.d();
        let mat = self
            .table
            .iter()
            .map(|row| {
                row.iter()
                    .map(|p| p.subst_sym(SYM_L, &minus_d))
                    .collect::<Result<_, _>>()
            })
            .collect::<Result<Vec<Vec<_>>, _>>()?;
        Ok(CdHom::new(
            ctx,
            self.algebra.module(),
            &self.algebra.module().dual(),
            mat,
        )?)
    }

    /// Non-degenerate iff ω♮ has unit determinant over ℚ[params][∂].
    pub fn is_nondegenerate(&self) -> Result<(bool, ScalarPoly), SymplecticError> {
        Ok(self.omega_natural()?.det_unit()?)
    }
}

/// Symplectic check: trivial-coefficient 2-cocycle residuals plus
/// non-degeneracy. Verdicts: pass (both), fail (both fail), split (mixed).
pub fn check_symplectic(omega: &TwoForm, subject: &str) -> Result<Report, SymplecticError> {
    let cocycle = two_cocycle_trivial_residuals(omega.algebra(), omega.table(), subject)?;
    let cocycle_ok = cocycle.passed();
    let (nondeg, det) = omega.is_nondegenerate()?;
    let mut report = Report::new("symplectic", subject);
    report.absorb("cocycle", cocycle);
    report.push(
        CheckItem::flag("nondegeneracy", nondeg).with_diagnostic("det", det),
    );
    report.verdict = match (cocycle_ok, nondeg) {
        (true, true) => Verdict::Pass,
        (false, false) => Verdict::Fail,
        _ => Verdict::Split,
    };
    if report.verdict == Verdict::Split {
        report.note(format!(
            "split verdict: cocycle {}, non-degeneracy {}",
            if cocycle_ok { "passes" } else { "fails" },
            if nondeg { "passes" } else { "fails" }
        ));
    }
    Ok(report)
}

/// The deformed 2-form `Ω_{N^k}[i][j](λ) = Σ_l N^k[i][l](−λ)·Ω[l][j](λ)`,
/// i.e. `{a λ b}_{ω_{N^k}} = ⟨ω♮(N^k(a)), b⟩_λ`. Skew-symmetry of the result
/// is re-checked by the TwoForm constructor.
pub fn omega_n(omega: &TwoForm, n_hom: &CdHom, k: u32) -> Result<TwoForm, SymplecticError> {
    let ctx = omega.ctx();
    let nk = n_hom.pow(k)?;
    let n = omega.algebra().rank();
    let minus_l = -&ctx.l();
    let mut table = vec![vec![ctx.zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = ctx.zero();
            for l in 0..n {
                if nk.mat[i][l].is_zero() || omega.table()[l][j].is_zero() {
                    continue;
                }
                let c = nk.mat[i][l].subst_sym(SYM_D, &minus_l)?;
                acc = &acc + &c.mul(&omega.table()[l][j])?;
            }
            table[i][j] = acc;
        }
    }
    TwoForm::new(omega.algebra(), table)
}

/// Closedness of `ω_{N^k}` for all `k ≤ kmax`; requires `(ω,N)` to be a
/// symplectic-Nijenhuis structure first.
pub fn check_omega_nk_closed(
    omega: &TwoForm,
    n_hom: &CdHom,
    kmax: u32,
    subject: &str,
) -> Result<Report, SymplecticError> {
    let sn = check_sn_structure(omega, n_hom, subject)?;
    if !sn.passed() {
        return Err(SymplecticError::Precondition(format!(
            "(ω,N) is not a symplectic-Nijenhuis structure:\n{sn}"
        )));
    }
    let mut report = Report::new("omega-nk-closed", subject);
    for k in 0..=kmax {
        let form = omega_n(omega, n_hom, k)?;
        report.absorb(
            &format!("k={k}"),
            two_cocycle_trivial_residuals(omega.algebra(), form.table(), subject)?,
        );
    }
    Ok(report)
}

/// Symplectic-Nijenhuis check: the compatibility residual
/// `Σ_l N[i][l](−λ)Ω[l][j](λ) − Σ_l N[j][l](λ)Ω[i][l](λ)` per generator pair
/// (`{N(a) λ b}_ω = {a λ N(b)}_ω`), plus closedness of `ω_N`. Preconditions
/// (ω symplectic, N Nijenhuis) are named on failure.
pub fn check_sn_structure(
    omega: &TwoForm,
    n_hom: &CdHom,
    subject: &str,
) -> Result<Report, SymplecticError> {
    let sym = check_symplectic(omega, subject)?;
    if !sym.passed() {
        return Err(SymplecticError::Precondition(format!(
            "ω is not a symplectic structure:\n{sym}"
        )));
    }
    let nij = check_nijenhuis_operator(omega.algebra(), n_hom);
    if !nij.passed() {
        return Err(SymplecticError::Precondition(format!(
            "N is not a Nijenhuis operator:\n{nij}"
        )));
    }
    let ctx = omega.ctx();
    let n = omega.algebra().rank();
    let basis = &omega.algebra().module().basis;
    let minus_l = -&ctx.l();
    let mut report = Report::new("sn-structure", subject);
    for i in 0..n {
        for j in 0..n {
            let mut acc = ctx.zero();
            for l in 0..n {
                if !n_hom.mat[i][l].is_zero() && !omega.table()[l][j].is_zero() {
                    let c = n_hom.mat[i][l].subst_sym(SYM_D, &minus_l)?;
                    acc = &acc + &c.mul(&omega.table()[l][j])?;
                }
                if !n_hom.mat[j][l].is_zero() && !omega.table()[i][l].is_zero() {
                    let c = n_hom.mat[j][l].subst_sym(SYM_D, &ctx.l())?;
                    acc = &acc - &c.mul(&omega.table()[i][l])?;
                }
            }
            report.push(CheckItem::residual(
                format!("compat ({},{})", basis[i], basis[j]),
                vec![("1".to_string(), acc)],
            ));
        }
    }
    match omega_n(omega, n_hom, 1) {
        Ok(omega_1) => {
            report.absorb(
                "closed(ω_N)",
                two_cocycle_trivial_residuals(omega.algebra(), omega_1.table(), subject)?,
            );
        }
        Err(SymplecticError::NotSkew { i, j }) => {
            report.push(CheckItem::flag(
                format!("ω_N fails to be a 2-form: not skew at ({i},{j})"),
                false,
            ));
        }
        Err(e) => return Err(e),
    }
    Ok(report)
}

/// The coadjoint pair `(A; ad*)`.
fn coadjoint_pair(algebra: &Arc<LcaStructure>) -> Result<RepStructure, SymplecticError> {
    Ok(coadjoint(&adjoint(algebra)?)?)
}

/// `(ω♮)⁻¹ : A*^c → A` for a symplectic ω, checked as an O-operator on the
/// coadjoint pair.
pub fn o_from_symplectic(
    omega: &TwoForm,
    subject: &str,
) -> Result<(CdHom, Report), SymplecticError> {
    let sym = check_symplectic(omega, subject)?;
    if !sym.passed() {
        return Err(SymplecticError::Precondition(format!(
            "ω is not a symplectic structure:\n{sym}"
        )));
    }
    let t = omega.omega_natural()?.invert()?;
    let pair = coadjoint_pair(omega.algebra())?;
    let report = check_o_operator(&pair, &t, subject);
    Ok((t, report))
}

/// The ON-structure `((ω♮)⁻¹, N, N*)` on the coadjoint pair, from a
/// symplectic-Nijenhuis structure.
pub fn on_from_sn(
    omega: &TwoForm,
    n_hom: &CdHom,
    subject: &str,
) -> Result<(CdHom, CdHom, CdHom, Report), SymplecticError> {
    let sn = check_sn_structure(omega, n_hom, subject)?;
    if !sn.passed() {
        return Err(SymplecticError::Precondition(format!(
            "(ω,N) is not a symplectic-Nijenhuis structure:\n{sn}"
        )));
    }
    let t = omega.omega_natural()?.invert()?;
    let s = n_hom.dual()?;
    let pair = coadjoint_pair(omega.algebra())?;
    let report = check_on_structure(&pair, &t, n_hom, &s, subject)?;
    Ok((t, n_hom.clone(), s, report))
}

/// Forward direction of the equivalence used by tests: a non-degenerate
/// 2-form whose triple passes the ON check is symplectic-Nijenhuis. Returns
/// the two reports so tests can compare the verdicts.
pub fn sn_on_equivalence(
    omega: &TwoForm,
    n_hom: &CdHom,
    subject: &str,
) -> Result<(bool, bool), SymplecticError> {
    let sn_pass = match check_sn_structure(omega, n_hom, subject) {
        Ok(r) => r.passed(),
        Err(SymplecticError::Precondition(_)) => false,
        Err(e) => return Err(e),
    };
    let on_pass = {
        let t = omega.omega_natural()?.invert()?;
        let s = n_hom.dual()?;
        let pair = coadjoint_pair(omega.algebra())?;
        match check_on_structure(&pair, &t, n_hom, &s, subject) {
            Ok(r) => r.passed(),
            Err(OOperatorError::Precondition(_)) => false,
            Err(e) => return Err(e.into()),
        }
    };
    Ok((sn_pass, on_pass))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lca::virasoro;
    use crate::freemod::CdModule;
    use crate::lca::LcaStructure;

    fn ctx() -> Context {
        Context::standard(&["k"])
    }

    /// The algebra `[a λ a]=0, [a λ b]=λa, [b λ b]=(∂+2λ)b`.
    fn sn3_algebra(c: &Context) -> Arc<LcaStructure> {
        let m = CdModule::new(vec!["a".into(), "b".into()]);
        Arc::new(
            LcaStructure::from_entries(
                c,
                &m,
                vec![
                    ((0, 0), vec![c.zero(), c.zero()]),
                    ((0, 1), vec![c.l(), c.zero()]),
                    ((1, 1), vec![c.zero(), &c.d() + &c.l().scale_int(2)]),
                ],
            )
            .unwrap()
            .verify()
            .unwrap(),
        )
    }

    #[test]
    fn rank1_form_is_degenerate() {
        let c = ctx();
        let vir = Arc::new(virasoro(&c));
        // skew-symmetry forces the single entry to vanish
        let omega = TwoForm::new(&vir, vec![vec![c.zero()]]).unwrap();
        let (nondeg, det) = omega.is_nondegenerate().unwrap();
        assert!(!nondeg);
        assert!(det.is_zero());
        assert!(TwoForm::new(&vir, vec![vec![c.l()]]).is_err());
    }

    #[test]
    fn sn3_form_splits() {
        let c = ctx();
        let alg = sn3_algebra(&c);
        let l2 = c.l().pow(2).unwrap();
        let omega = TwoForm::new(&alg, vec![vec![c.zero(), l2.clone()], vec![-&l2, c.zero()]])
            .unwrap();
        let h = omega.omega_natural().unwrap();
        assert_eq!(h.mat[0][1], c.d().pow(2).unwrap());
        assert_eq!(h.mat[1][0], -&c.d().pow(2).unwrap());
        let report = check_symplectic(&omega, "sn3").unwrap();
        assert_eq!(report.verdict, Verdict::Split);
        // determinant is ∂⁴
        let (_, det) = omega.is_nondegenerate().unwrap();
        assert_eq!(det, c.d().pow(4).unwrap());
        // and the inverse is unavailable
        assert!(matches!(
            o_from_symplectic(&omega, "sn3"),
            Err(SymplecticError::Precondition(_))
        ));
    }

    #[test]
    fn zero_form_splits_as_degenerate() {
        let c = ctx();
        let alg = sn3_algebra(&c);
        let omega = TwoForm::new(&alg, vec![vec![c.zero(); 2]; 2]).unwrap();
        let report = check_symplectic(&omega, "0").unwrap();
        assert_eq!(report.verdict, Verdict::Split);
    }

    #[test]
    fn constant_form_on_abelian_rank2() {
        let c = ctx();
        let m = CdModule::new(vec!["x".into(), "y".into()]);
        let abelian = Arc::new(
            LcaStructure::from_entries(&c, &m, vec![])
                .unwrap()
                .verify()
                .unwrap(),
        );
        let omega = TwoForm::new(
            &abelian,
            vec![vec![c.zero(), c.int(-1)], vec![c.one(), c.zero()]],
        )
        .unwrap();
        let (t, report) = o_from_symplectic(&omega, "abelian").unwrap();
        assert!(report.passed());
        // ω♮ = [[0,-1],[1,0]] constant, inverse [[0,1],[-1,0]]
        assert_eq!(t.mat[0][1], c.one());
        assert_eq!(t.mat[1][0], c.int(-1));
    }

    #[test]
    fn omega_n_identity_and_scalar() {
        let c = ctx();
        let alg = sn3_algebra(&c);
        let l2 = c.l().pow(2).unwrap();
        let omega =
            TwoForm::new(&alg, vec![vec![c.zero(), l2.clone()], vec![-&l2, c.zero()]]).unwrap();
        let id = CdHom::identity(&c, alg.module());
        let same = omega_n(&omega, &id, 1).unwrap();
        assert_eq!(same.table(), omega.table());
        let k = c.sym_named("k").unwrap();
        let scaled = omega_n(&omega, &id.scale(&k).unwrap(), 1).unwrap();
        assert_eq!(scaled.table()[0][1], l2.mul(&k).unwrap());
    }
}
