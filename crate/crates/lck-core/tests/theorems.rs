//! Theorem-shaped invariants tying the modules together: the deformed-pair
//! statements for ON-structures, the three-bracket coincidence, power
//! stability, and the equivalence between symplectic-Nijenhuis and
//! ON-structures in both directions.

use lck_core::freemod::{CdHom, CdModule};
use lck_core::lca::{deformed_bracket, semidirect, LcaStructure};
use lck_core::nijenhuis::check_nijenhuis_operator;
use lck_core::ooperator::{
    check_o_operator, check_on_structure, deform_table_by_s, subadjacent, subadjacent_table,
};
use lck_core::poly::{Context, ScalarPoly};
use lck_core::rep::{coadjoint, deformed_rep, RepStructure};
use lck_core::symplectic::{check_sn_structure, omega_n, sn_on_equivalence, TwoForm};
use lck_core::ybe::{coadjoint_pair, r_from_symplectic};
use std::sync::Arc;

fn ctx_sn2() -> Context {
    Context::standard(&["k", "l", "m", "k1", "k2"])
}

struct Sn2 {
    d_alg: Arc<LcaStructure>,
    pair: RepStructure,
    form: TwoForm,
    t: CdHom,
    n: CdHom,
    s: CdHom,
}

fn sn2(c: &Context) -> Sn2 {
    let module = CdModule::new(vec!["a".into(), "b".into()]);
    let k = c.sym_named("k").unwrap();
    let l = c.sym_named("l").unwrap();
    let m = c.sym_named("m").unwrap();
    let pab = &(&c.d() + &k.mul(&c.l()).unwrap()) + &l;
    let alg = Arc::new(
        LcaStructure::from_entries(
            c,
            &module,
            vec![
                ((0, 0), vec![&c.d() + &c.l().scale_int(2), c.zero()]),
                ((0, 1), vec![c.zero(), pab.clone()]),
                ((1, 1), vec![c.zero(), c.zero()]),
            ],
        )
        .unwrap()
        .verify()
        .unwrap(),
    );
    let qaa = &(&c.d() + &c.l()) + &m;
    let mut table = vec![vec![vec![c.zero(); 2]; 2]; 2];
    table[0][0][0] = qaa;
    table[0][1][1] = pab;
    let rho = RepStructure::new(&alg, &module, table)
        .unwrap()
        .verify()
        .unwrap();
    let coad = coadjoint(&rho).unwrap();
    let d_alg = Arc::new(semidirect(&alg, &coad).unwrap());
    let mut omega = vec![vec![c.zero(); 4]; 4];
    omega[0][2] = c.int(-1);
    omega[2][0] = c.one();
    omega[1][3] = c.int(-1);
    omega[3][1] = c.one();
    let form = TwoForm::new(&d_alg, omega).unwrap();
    let k1 = c.sym_named("k1").unwrap();
    let k2 = c.sym_named("k2").unwrap();
    let mut nmat = vec![vec![c.zero(); 4]; 4];
    nmat[0][0] = k1.clone();
    nmat[1][1] = k2.clone();
    nmat[2][2] = k1;
    nmat[3][3] = k2;
    let n = CdHom::new(c, d_alg.module(), d_alg.module(), nmat).unwrap();
    let s = n.dual().unwrap();
    let t = form.omega_natural().unwrap().invert().unwrap();
    let pair = coadjoint_pair(&d_alg).unwrap();
    Sn2 {
        d_alg,
        pair,
        form,
        t,
        n,
        s,
    }
}

fn tables_equal(a: &[Vec<Vec<ScalarPoly>>], b: &[Vec<Vec<ScalarPoly>>]) -> bool {
    a.iter().zip(b).all(|(p, q)| {
        p.iter()
            .zip(q)
            .all(|(r, s)| r.iter().zip(s).all(|(x, y)| (x - y).is_zero()))
    })
}

/// First part of the deformed-pair theorem: T stays an O-operator against
/// the deformed algebra with the deformed representation.
#[test]
fn t_is_o_operator_on_deformed_pair() {
    let c = ctx_sn2();
    let d = sn2(&c);
    let rho_tilde = deformed_rep(&d.pair, &d.n, &d.s).unwrap();
    let report = check_o_operator(&rho_tilde, &d.t, "T over deformed pair");
    assert!(report.passed(), "{report}");
}

/// Second part: N∘T is an O-operator on the original pair.
#[test]
fn nt_is_o_operator_on_original_pair() {
    let c = ctx_sn2();
    let d = sn2(&c);
    let nt = d.t.then(&d.n).unwrap();
    let report = check_o_operator(&d.pair, &nt, "N∘T");
    assert!(report.passed(), "{report}");
}

/// Three-bracket coincidence: the sub-adjacent bracket of N∘T, the
/// S-deformation of the sub-adjacent bracket of T, and the sub-adjacent
/// bracket of T taken over the deformed representation all agree.
#[test]
fn three_bracket_coincidence() {
    let c = ctx_sn2();
    let d = sn2(&c);
    let nt = d.t.then(&d.n).unwrap();
    let via_nt = subadjacent_table(&d.pair, &nt).unwrap();
    let t_table = subadjacent_table(&d.pair, &d.t).unwrap();
    let via_s = deform_table_by_s(&c, &t_table, &d.s).unwrap();
    let rho_tilde = deformed_rep(&d.pair, &d.n, &d.s).unwrap();
    let via_tilde = subadjacent_table(&rho_tilde, &d.t).unwrap();
    assert!(tables_equal(&via_nt, &via_s));
    assert!(tables_equal(&via_nt, &via_tilde));
}

/// S is a Nijenhuis operator on the sub-adjacent algebra of T.
#[test]
fn s_is_nijenhuis_on_subadjacent() {
    let c = ctx_sn2();
    let d = sn2(&c);
    let (sub, report) = subadjacent(&d.pair, &d.t, "T").unwrap();
    assert!(report.passed());
    let nij = check_nijenhuis_operator(&sub, &d.s);
    assert!(nij.passed(), "{nij}");
}

/// Power stability for invertible T: `(T, N^k, S^k)` and `(N^k∘T, N^k, S^k)`
/// are ON-structures for k = 2, 3.
#[test]
fn on_structure_powers() {
    let c = ctx_sn2();
    let d = sn2(&c);
    for k in 2..=3u32 {
        let nk = d.n.pow(k).unwrap();
        let sk = d.s.pow(k).unwrap();
        let r1 = check_on_structure(&d.pair, &d.t, &nk, &sk, "T,N^k,S^k").unwrap();
        assert!(r1.passed(), "k={k}: {r1}");
        let tk = d.t.then(&nk).unwrap();
        let r2 = check_on_structure(&d.pair, &tk, &nk, &sk, "N^kT,N^k,S^k").unwrap();
        assert!(r2.passed(), "k={k}: {r2}");
    }
}

/// Deformed brackets of Nijenhuis operators remain Lie conformal on the
/// deformed semidirect algebra.
#[test]
fn deformed_sn2_algebra_passes() {
    let c = ctx_sn2();
    let d = sn2(&c);
    let deformed = deformed_bracket(&d.d_alg, &d.n).unwrap();
    assert!(deformed.check_axioms("deformed D").passed());
}

/// The symplectic-Nijenhuis and ON-structure verdicts agree in both
/// directions, including a failing instance with a genuine Nijenhuis N.
#[test]
fn sn_on_equivalence_both_directions() {
    let c = ctx_sn2();
    let d = sn2(&c);
    let (sn_pass, on_pass) = sn_on_equivalence(&d.form, &d.n, "sn2").unwrap();
    assert!(sn_pass && on_pass);

    // a Nijenhuis operator that breaks the form compatibility: scalars on the
    // subalgebras A and A*^c with different constants
    let k1 = c.sym_named("k1").unwrap();
    let k2 = c.sym_named("k2").unwrap();
    let mut nmat = vec![vec![c.zero(); 4]; 4];
    nmat[0][0] = k1.clone();
    nmat[1][1] = k1;
    nmat[2][2] = k2.clone();
    nmat[3][3] = k2;
    let bad_n = CdHom::new(&c, d.d_alg.module(), d.d_alg.module(), nmat).unwrap();
    assert!(check_nijenhuis_operator(&d.d_alg, &bad_n).passed());
    let result = sn_on_equivalence(&d.form, &bad_n, "sn2-bad");
    let (sn_pass, on_pass) = match result {
        Ok(v) => v,
        Err(e) => panic!("sn_on_equivalence errored: {e}"),
    };
    assert!(!sn_pass);
    assert_eq!(sn_pass, on_pass);
}

/// Powers of a symplectic-Nijenhuis pair stay symplectic-Nijenhuis (k ≤ 3)
/// and the deformed forms stay closed.
#[test]
fn sn_powers_and_closedness() {
    let c = ctx_sn2();
    let d = sn2(&c);
    for k in 1..=3u32 {
        let nk = d.n.pow(k).unwrap();
        let report = check_sn_structure(&d.form, &nk, "omega,N^k").unwrap();
        assert!(report.passed(), "k={k}: {report}");
        let form_k = omega_n(&d.form, &d.n, k).unwrap();
        let cocycle =
            lck_core::lca::two_cocycle_trivial_residuals(&d.d_alg, form_k.table(), "omega_Nk")
                .unwrap();
        assert!(cocycle.passed(), "k={k}");
    }
}

/// `r♯₀` of the deformed tensor equals `N ∘ r♯₀`.
#[test]
fn r_sharp_commutes_with_deformation() {
    let c = ctx_sn2();
    let d = sn2(&c);
    let r = r_from_symplectic(&d.form).unwrap();
    let rn = r.deform_by(&d.n).unwrap();
    let lhs = rn.r_sharp0().unwrap();
    let rhs = r.r_sharp0().unwrap().then(&d.n).unwrap();
    assert_eq!(lhs.mat, rhs.mat);
}

/// The induced 2-form of a non-degenerate skew conformal r-matrix is
/// symplectic exactly when the tensor solves the Yang-Baxter equation
/// (checked through `r_from_symplectic` being a section of the form side).
#[test]
fn form_tensor_correspondence_on_sn2() {
    let c = ctx_sn2();
    let d = sn2(&c);
    let r = r_from_symplectic(&d.form).unwrap();
    // the tensor is λ-constant and invertible, and its r♯₀ matches (ω♮)⁻¹
    let nondeg = r.is_nondegenerate("r").unwrap();
    assert!(nondeg.passed());
    assert_eq!(r.r_sharp0().unwrap().mat, d.t.mat);
}

/// Whenever `(N,S)` is a Nijenhuis structure on `(A;ρ)`, the pair `(N, S*)`
/// generates a trivial infinitesimal deformation of `(A;ρ*)`: the t-extended
/// pair satisfies all axioms with t a formal indeterminate.
#[test]
fn dual_pair_generates_trivial_deformation() {
    let c = ctx_sn2();
    let d = sn2(&c);
    let structure =
        lck_core::nijenhuis::check_nijenhuis_structure(&d.d_alg, &d.pair, &d.n, &d.s).unwrap();
    assert!(structure.passed());
    let coad = coadjoint(&d.pair).unwrap();
    let s_star = d.s.dual().unwrap();
    let report =
        lck_core::nijenhuis::check_trivial_lp_deformation(&d.d_alg, &coad, &d.n, &s_star).unwrap();
    assert!(report.passed(), "{report}");
}

/// The nilpotent operator N(a)=f(∂)b with a symbolic cubic f, paired with
/// its dual on the coadjoint module, deforms the representation into a
/// verified module over the deformed rank-2 algebra.
#[test]
fn deformed_rep_with_nilpotent_operator() {
    let c = Context::standard(&["c0", "c1", "c2", "c3"]);
    let m = CdModule::new(vec!["a".into(), "b".into()]);
    let alg = Arc::new(
        LcaStructure::from_entries(
            &c,
            &m,
            vec![
                ((0, 0), vec![&c.d() + &c.l().scale_int(2), c.zero()]),
                ((0, 1), vec![c.zero(), &c.d() + &c.l()]),
                ((1, 1), vec![c.zero(), c.zero()]),
            ],
        )
        .unwrap()
        .verify()
        .unwrap(),
    );
    let mut f = c.sym_named("c0").unwrap();
    for (deg, name) in [(1u32, "c1"), (2, "c2"), (3, "c3")] {
        f = &f + &c.sym_named(name).unwrap().mul(&c.d().pow(deg).unwrap()).unwrap();
    }
    let n = CdHom::new(
        &c,
        alg.module(),
        alg.module(),
        vec![vec![c.zero(), f], vec![c.zero(), c.zero()]],
    )
    .unwrap();
    let coad = coadjoint_pair(&alg).unwrap();
    let s = n.dual().unwrap();
    let tilde = deformed_rep(&coad, &n, &s).unwrap();
    assert!(tilde.is_verified());
}

/// The packaged SN → ON bridge returns the verified triple.
#[test]
fn on_from_sn_returns_passing_triple() {
    let c = ctx_sn2();
    let d = sn2(&c);
    let (t, _, s, report) = lck_core::symplectic::on_from_sn(&d.form, &d.n, "sn2").unwrap();
    assert!(report.passed());
    assert_eq!(t.mat, d.t.mat);
    assert_eq!(s.mat, d.s.mat);
}

/// There is no invertible O-operator on the rank-1 coadjoint pair of the
/// `(∂+2λ)` algebra: the operator equation forces T = 0. This pins the
/// reason the invertible-operator tests run on the current-algebra pair.
#[test]
fn rank1_coadjoint_admits_only_zero_o_operator() {
    let c = Context::standard(&["c0", "c1"]);
    let m = CdModule::new(vec!["a".into()]);
    let vir = Arc::new(
        LcaStructure::from_entries(&c, &m, vec![((0, 0), vec![&c.d() + &c.l().scale_int(2)])])
            .unwrap()
            .verify()
            .unwrap(),
    );
    let pair = coadjoint_pair(&vir).unwrap();
    // generic degree-1 candidate T(a') = (c0 + c1 ∂) a
    let f = &c.sym_named("c0").unwrap() + &c.sym_named("c1").unwrap().mul(&c.d()).unwrap();
    let t = CdHom::new(&c, pair.module(), vir.module(), vec![vec![f]]).unwrap();
    assert!(!check_o_operator(&pair, &t, "generic").passed());
    let zero = CdHom::zero(&c, pair.module(), vir.module());
    assert!(check_o_operator(&pair, &zero, "zero").passed());
}
