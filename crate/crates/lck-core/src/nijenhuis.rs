//! Nijenhuis operators on Lie conformal algebras and Nijenhuis structures
//! `(N, S)` on an algebra-module pair, with the semidirect-product
//! characterization and the trivial-deformation equations.

use crate::freemod::{CdHom, CdModule, ElemPoly};
use crate::lca::{
    coboundary_1, deformed_bracket, deform_with_parameter, semidirect, CochainCoeffs, LcaError,
    LcaStructure,
};
use crate::parallel::indexed_map;
use crate::poly::ScalarPoly;
use crate::rep::{varpi_table, RepError, RepStructure};
use crate::report::{CheckItem, Report};
use std::sync::Arc;

#[derive(Debug, Clone, thiserror::Error)]
pub enum NijenhuisError {
    #[error(transparent)]
    Lca(#[from] LcaError),
    #[error(transparent)]
    Rep(#[from] RepError),
    #[error("precondition failed: {0}")]
    Precondition(String),
}

/// Residual of the Nijenhuis condition
/// `N([N(a) λ b] + [a λ N(b)] − N[a λ b]) − [N(a) λ N(b)]`
/// on every generator pair; passes iff all residuals vanish in (λ, ∂).
pub fn check_nijenhuis_operator(l: &LcaStructure, n_hom: &CdHom) -> Report {
    let mut report = Report::new("nijenhuis-operator", "N");
    if n_hom.source != *l.module() || n_hom.target != *l.module() {
        report.mark_error("N is not an endomorphism of the algebra's module");
        return report;
    }
    let rank = l.rank();
    let pairs: Vec<(usize, usize)> = (0..rank)
        .flat_map(|i| (0..rank).map(move |j| (i, j)))
        .collect();
    let items = indexed_map(pairs.len(), |t| {
        let (i, j) = pairs[t];
        let compute = || -> Result<ElemPoly, LcaError> {
            let ei = l.basis_elem(i);
            let ej = l.basis_elem(j);
            let nei = n_hom.apply(&ei)?;
            let nej = n_hom.apply(&ej)?;
            let deformed = &(&l.bracket(&nei, &ej)? + &l.bracket(&ei, &nej)?)
                - &n_hom.apply(&l.bracket(&ei, &ej)?)?;
            let lhs = n_hom.apply(&deformed)?;
            let rhs = l.bracket(&nei, &nej)?;
            Ok(&lhs - &rhs)
        };
        let loc = format!(
            "nijenhuis ({},{})",
            l.module().basis[i],
            l.module().basis[j]
        );
        match compute() {
            Ok(r) => CheckItem::residual(
                loc,
                r.coeffs
                    .iter()
                    .enumerate()
                    .map(|(c, p)| (l.module().basis[c].clone(), p.clone()))
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

/// Residual of the structure condition
/// `ρ(N(a))_λ S(v) − S(ρ(N(a))_λ v) − ρ(a)_λ S²(v) + S(ρ(a)_λ S(v))`
/// per (algebra generator, module generator) pair.
///
/// Preconditions (each failure is named): N passes the Nijenhuis check and
/// the representation is verified.
pub fn check_nijenhuis_structure(
    l: &Arc<LcaStructure>,
    r: &RepStructure,
    n_hom: &CdHom,
    s_hom: &CdHom,
) -> Result<Report, NijenhuisError> {
    r.ensure_verified()
        .map_err(|_| NijenhuisError::Precondition("representation is not verified".into()))?;
    let op = check_nijenhuis_operator(l, n_hom);
    if !op.passed() {
        return Err(NijenhuisError::Precondition(format!(
            "N is not a Nijenhuis operator:\n{op}"
        )));
    }
    if s_hom.source != *r.module() || s_hom.target != *r.module() {
        return Err(NijenhuisError::Precondition(
            "S is not an endomorphism of the module".into(),
        ));
    }
    Ok(structure_condition_report(l, r, n_hom, s_hom)?)
}

/// The bare structure-condition residuals without precondition checks; used by
/// the semidirect characterization where both directions are compared.
fn structure_condition_report(
    l: &Arc<LcaStructure>,
    r: &RepStructure,
    n_hom: &CdHom,
    s_hom: &CdHom,
) -> Result<Report, RepError> {
    let ctx = l.ctx();
    let lam = ctx.l();
    let n = l.rank();
    let m = r.module().rank();
    let mut report = Report::new("nijenhuis-structure", "(N,S)");
    let s2 = s_hom.then(s_hom)?;
    for i in 0..n {
        let nei = n_hom.apply(&l.basis_elem(i))?;
        for j in 0..m {
            let vj = r.basis_vector(j);
            let t1 = r.act_elem(&nei, &s_hom.apply(&vj)?, &lam)?;
            let t2 = s_hom.apply(&r.act_elem(&nei, &vj, &lam)?)?;
            let t3 = r.act_gen(i, &s2.apply(&vj)?, &lam)?;
            let t4 = s_hom.apply(&r.act_gen(i, &s_hom.apply(&vj)?, &lam)?)?;
            let residual = &(&(&t1 - &t2) - &t3) + &t4;
            report.push(CheckItem::residual(
                format!(
                    "structure ({},{})",
                    l.module().basis[i],
                    r.module().basis[j]
                ),
                residual
                    .coeffs
                    .iter()
                    .enumerate()
                    .map(|(c, p)| (r.module().basis[c].clone(), p.clone()))
                    .collect(),
            ));
        }
    }
    Ok(report)
}

/// Builds `N ⊕ S` on the semidirect product and compares the Nijenhuis check
/// there against "(N Nijenhuis on A) and the structure condition holds".
/// Both directions are evaluated; the report records each side and fails if
/// they disagree.
pub fn check_semidirect_characterization(
    l: &Arc<LcaStructure>,
    r: &RepStructure,
    n_hom: &CdHom,
    s_hom: &CdHom,
) -> Result<Report, NijenhuisError> {
    let d = semidirect(l, r)?;
    let sum_module: Arc<CdModule> = d.module().clone();
    let combined = CdHom::block_diag(&sum_module, n_hom, s_hom);
    let on_product = check_nijenhuis_operator(&d, &combined);
    let on_a = check_nijenhuis_operator(l, n_hom);
    let structure = structure_condition_report(l, r, n_hom, s_hom)?;
    let lhs = on_product.passed();
    let rhs = on_a.passed() && structure.passed();
    let mut report = Report::new("semidirect-characterization", "(N⊕S)");
    report.push(CheckItem::flag(
        format!("N⊕S nijenhuis on semidirect: {}", verdict_word(lhs)),
        true,
    ));
    report.push(CheckItem::flag(
        format!(
            "N nijenhuis on A: {}, structure condition: {}",
            verdict_word(on_a.passed()),
            verdict_word(structure.passed())
        ),
        true,
    ));
    report.push(CheckItem::flag("equivalence of the two sides", lhs == rhs));
    report.absorb("semidirect", on_product);
    report.absorb("operator", on_a);
    report.absorb("structure", structure);
    if lhs != rhs {
        report.note("the two characterizations disagree; this is a bug witness");
    }
    Ok(report)
}

fn verdict_word(pass: bool) -> &'static str {
    if pass {
        "pass"
    } else {
        "fail"
    }
}

/// Trivial-deformation equations for an LP pair (Theorem on trivial
/// deformations): with ω := dN and ϖ the deformed action direction, the
/// t-extended pair `(P + t·dN, Q + t·ϖ)` must satisfy all algebra and module
/// axioms with t a formal indeterminate.
pub fn check_trivial_lp_deformation(
    l: &Arc<LcaStructure>,
    r: &RepStructure,
    n_hom: &CdHom,
    s_hom: &CdHom,
) -> Result<Report, NijenhuisError> {
    let dn = coboundary_1(l, CochainCoeffs::Adjoint, n_hom)?;
    let deformed_alg = deform_with_parameter(l, &dn)?;
    let mut report = Report::new("trivial-lp-deformation", "(N,S)");
    report.note("t is treated as a formal indeterminate, which is stronger than quantifying over scalar values");
    let alg_report = deformed_alg.check_axioms("t-deformed algebra");
    let alg_ok = alg_report.passed();
    report.absorb("algebra(t)", alg_report);
    if !alg_ok {
        return Ok(report);
    }
    let deformed_alg = Arc::new(deformed_alg.verify().expect("just checked"));
    // module table Q + t·ϖ over the t-extended context
    let ctx_t = deformed_alg.ctx().clone();
    let t = ctx_t
        .sym_named("t")
        .map_err(|e| NijenhuisError::Precondition(e.to_string()))?;
    let varpi = varpi_table(r, n_hom, s_hom)?;
    let n = l.rank();
    let m = r.module().rank();
    let mut table = vec![vec![Vec::new(); m]; n];
    for i in 0..n {
        for j in 0..m {
            let row: Result<Vec<ScalarPoly>, LcaError> = (0..m)
                .map(|k| {
                    let base = r.table()[i][j][k].lift_to(&ctx_t)?;
                    let w = varpi[i][j][k].lift_to(&ctx_t)?;
                    Ok(&base + &w.mul(&t)?)
                })
                .collect();
            table[i][j] = row?;
        }
    }
    let rep_t = RepStructure::new(&deformed_alg, r.module(), table)?;
    let rep_report = rep_t.check_axioms("t-deformed module");
    report.absorb("module(t)", rep_report);
    Ok(report)
}

/// Convenience used by tests: the deformed bracket is an algebra and N is a
/// homomorphism from the deformed to the original structure whenever N is
/// Nijenhuis (the deformed-bracket/fixed-point identity `N{·λ·}_N = [N· λ N·]`
/// is the Nijenhuis residual itself).
pub fn deformed_is_algebra(l: &LcaStructure, n_hom: &CdHom) -> Result<bool, NijenhuisError> {
    let def = deformed_bracket(l, n_hom)?;
    Ok(def.check_axioms("deformed").passed())
}
