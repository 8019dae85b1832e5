//! Novikov algebras, Gel'fand-Dorfman bialgebras, Nijenhuis operators on
//! them, and the lift to quadratic Lie conformal algebras.
//!
//! Novikov/GD data live over the scalar ring only (no ∂); the lift introduces
//! ∂ at exactly one point, in [`quadratic_from_gd`] / [`lift_hom`].

use crate::freemod::{CdHom, CdModule};
use crate::lca::{LcaError, LcaStructure};
use crate::poly::{Context, PolyError, ScalarPoly, SymbolKind};
use crate::report::{CheckItem, Report};

#[derive(Debug, Clone, thiserror::Error)]
pub enum GdError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("table entry uses symbol {0}; Novikov/GD data are scalar (parameters only)")]
    ForbiddenSymbol(String),
    #[error("dimension mismatch")]
    DimensionMismatch,
    #[error("structure is not verified: {0}")]
    Unverified(String),
    #[error("lift failed: {0}")]
    Lift(#[from] LcaError),
}

fn validate_scalar_table(ctx: &Context, table: &[Vec<Vec<ScalarPoly>>]) -> Result<(), GdError> {
    for plane in table {
        for row in plane {
            for p in row {
                for idx in p.support() {
                    if ctx.kind(idx) != SymbolKind::Param {
                        return Err(GdError::ForbiddenSymbol(ctx.name(idx).to_string()));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Bilinear multiplication table `a_i ∘ a_j = Σ_k m[i][j][k] a_k` over ℚ[params].
#[derive(Debug, Clone)]
pub struct NovikovAlgebra {
    ctx: Context,
    pub basis: Vec<String>,
    pub mul: Vec<Vec<Vec<ScalarPoly>>>,
    verified: bool,
}

impl NovikovAlgebra {
    pub fn new(
        ctx: &Context,
        basis: Vec<String>,
        mul: Vec<Vec<Vec<ScalarPoly>>>,
    ) -> Result<NovikovAlgebra, GdError> {
        let d = basis.len();
        if mul.len() != d || mul.iter().any(|p| p.len() != d || p.iter().any(|r| r.len() != d)) {
            return Err(GdError::DimensionMismatch);
        }
        validate_scalar_table(ctx, &mul)?;
        Ok(NovikovAlgebra {
            ctx: ctx.clone(),
            basis,
            mul,
            verified: false,
        })
    }

    pub fn ctx(&self) -> &Context {
        &self.ctx
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn verify(mut self) -> Result<NovikovAlgebra, Box<Report>> {
        let r = check_novikov(&self, "novikov");
        if r.passed() {
            self.verified = true;
            Ok(self)
        } else {
            Err(Box::new(r))
        }
    }

    /// Product of two coefficient vectors through the table.
    fn mul_vec(&self, x: &[ScalarPoly], y: &[ScalarPoly]) -> Result<Vec<ScalarPoly>, PolyError> {
        let d = self.dim();
        let mut out = vec![self.ctx.zero(); d];
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() {
                    continue;
                }
                let c = x[i].mul(&y[j])?;
                for k in 0..d {
                    if !self.mul[i][j][k].is_zero() {
                        out[k] = &out[k] + &c.mul(&self.mul[i][j][k])?;
                    }
                }
            }
        }
        Ok(out)
    }
}

fn basis_vec(ctx: &Context, d: usize, i: usize) -> Vec<ScalarPoly> {
    let mut v = vec![ctx.zero(); d];
    v[i] = ctx.one();
    v
}

fn vec_sub(a: &[ScalarPoly], b: &[ScalarPoly]) -> Vec<ScalarPoly> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn vec_add(a: &[ScalarPoly], b: &[ScalarPoly]) -> Vec<ScalarPoly> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Residuals of the two Novikov axioms per index triple:
/// right-commutativity `(a∘b)∘c − (a∘c)∘b` and left-symmetry
/// `(a∘b)∘c − a∘(b∘c) − (b∘a)∘c + b∘(a∘c)`.
pub fn check_novikov(nov: &NovikovAlgebra, subject: &str) -> Report {
    let d = nov.dim();
    let ctx = nov.ctx();
    let mut report = Report::new("novikov", subject);
    let run = |i: usize, j: usize, k: usize| -> Result<(Vec<ScalarPoly>, Vec<ScalarPoly>), PolyError> {
        let a = basis_vec(ctx, d, i);
        let b = basis_vec(ctx, d, j);
        let c = basis_vec(ctx, d, k);
        let ab = nov.mul_vec(&a, &b)?;
        let ac = nov.mul_vec(&a, &c)?;
        let ba = nov.mul_vec(&b, &a)?;
        let bc = nov.mul_vec(&b, &c)?;
        let right_comm = vec_sub(&nov.mul_vec(&ab, &c)?, &nov.mul_vec(&ac, &b)?);
        let left_sym = vec_sub(
            &vec_sub(&nov.mul_vec(&ab, &c)?, &nov.mul_vec(&a, &bc)?),
            &vec_sub(&nov.mul_vec(&ba, &c)?, &nov.mul_vec(&b, &ac)?),
        );
        Ok((right_comm, left_sym))
    };
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                match run(i, j, k) {
                    Ok((rc, ls)) => {
                        let tag = |v: Vec<ScalarPoly>| {
                            v.into_iter()
                                .enumerate()
                                .map(|(c, p)| (nov.basis[c].clone(), p))
                                .collect()
                        };
                        report.push(CheckItem::residual(
                            format!(
                                "right-commutativity ({},{},{})",
                                nov.basis[i], nov.basis[j], nov.basis[k]
                            ),
                            tag(rc),
                        ));
                        report.push(CheckItem::residual(
                            format!(
                                "left-symmetry ({},{},{})",
                                nov.basis[i], nov.basis[j], nov.basis[k]
                            ),
                            tag(ls),
                        ));
                    }
                    Err(e) => report.push(CheckItem::flag(format!("({i},{j},{k}) [{e}]"), false)),
                }
            }
        }
    }
    report
}

/// A Novikov algebra together with a Lie bracket on the same space.
#[derive(Debug, Clone)]
pub struct GdBialgebra {
    pub nov: NovikovAlgebra,
    /// Lie bracket table `[a_i, a_j] = Σ_k lie[i][j][k] a_k`.
    pub lie: Vec<Vec<Vec<ScalarPoly>>>,
    verified: bool,
}

impl GdBialgebra {
    pub fn new(nov: NovikovAlgebra, lie: Vec<Vec<Vec<ScalarPoly>>>) -> Result<GdBialgebra, GdError> {
        let d = nov.dim();
        if lie.len() != d || lie.iter().any(|p| p.len() != d || p.iter().any(|r| r.len() != d)) {
            return Err(GdError::DimensionMismatch);
        }
        validate_scalar_table(nov.ctx(), &lie)?;
        Ok(GdBialgebra {
            nov,
            lie,
            verified: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.nov.dim()
    }

    pub fn ctx(&self) -> &Context {
        self.nov.ctx()
    }

    pub fn is_verified(&self) -> bool {
        self.verified
    }

    pub fn verify(mut self) -> Result<GdBialgebra, Box<Report>> {
        let r = check_gd(&self, "gd");
        if r.passed() {
            self.verified = true;
            Ok(self)
        } else {
            Err(Box::new(r))
        }
    }

    fn lie_vec(&self, x: &[ScalarPoly], y: &[ScalarPoly]) -> Result<Vec<ScalarPoly>, PolyError> {
        let d = self.dim();
        let ctx = self.ctx();
        let mut out = vec![ctx.zero(); d];
        for i in 0..d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if y[j].is_zero() {
                    continue;
                }
                let c = x[i].mul(&y[j])?;
                for k in 0..d {
                    if !self.lie[i][j][k].is_zero() {
                        out[k] = &out[k] + &c.mul(&self.lie[i][j][k])?;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Lie axioms of the bracket plus the Gel'fand-Dorfman compatibility
/// `[a∘b,c] + [a,b]∘c − a∘[b,c] − [a∘c,b] − [a,c]∘b = 0`, all as residuals.
pub fn check_gd(gd: &GdBialgebra, subject: &str) -> Report {
    let d = gd.dim();
    let ctx = gd.ctx();
    let mut report = Report::new("gd-bialgebra", subject);
    report.absorb("novikov", check_novikov(&gd.nov, subject));
    // antisymmetry and Jacobi of the Lie table
    for i in 0..d {
        for j in 0..d {
            let anti: Vec<(String, ScalarPoly)> = (0..d)
                .map(|k| {
                    (
                        gd.nov.basis[k].clone(),
                        &gd.lie[i][j][k] + &gd.lie[j][i][k],
                    )
                })
                .collect();
            report.push(CheckItem::residual(
                format!("lie-antisymmetry ({},{})", gd.nov.basis[i], gd.nov.basis[j]),
                anti,
            ));
        }
    }
    let run = |i: usize, j: usize, k: usize| -> Result<(Vec<ScalarPoly>, Vec<ScalarPoly>), PolyError> {
        let a = basis_vec(ctx, d, i);
        let b = basis_vec(ctx, d, j);
        let c = basis_vec(ctx, d, k);
        let jac = vec_add(
            &vec_add(
                &gd.lie_vec(&gd.lie_vec(&a, &b)?, &c)?,
                &gd.lie_vec(&gd.lie_vec(&b, &c)?, &a)?,
            ),
            &gd.lie_vec(&gd.lie_vec(&c, &a)?, &b)?,
        );
        let compat = vec_sub(
            &vec_sub(
                &vec_sub(
                    &vec_add(
                        &gd.lie_vec(&gd.nov.mul_vec(&a, &b)?, &c)?,
                        &gd.nov.mul_vec(&gd.lie_vec(&a, &b)?, &c)?,
                    ),
                    &gd.nov.mul_vec(&a, &gd.lie_vec(&b, &c)?)?,
                ),
                &gd.lie_vec(&gd.nov.mul_vec(&a, &c)?, &b)?,
            ),
            &gd.nov.mul_vec(&gd.lie_vec(&a, &c)?, &b)?,
        );
        Ok((jac, compat))
    };
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                match run(i, j, k) {
                    Ok((jac, compat)) => {
                        let tag = |v: Vec<ScalarPoly>| {
                            v.into_iter()
                                .enumerate()
                                .map(|(c, p)| (gd.nov.basis[c].clone(), p))
                                .collect()
                        };
                        report.push(CheckItem::residual(
                            format!(
                                "lie-jacobi ({},{},{})",
                                gd.nov.basis[i], gd.nov.basis[j], gd.nov.basis[k]
                            ),
                            tag(jac),
                        ));
                        report.push(CheckItem::residual(
                            format!(
                                "gd-compatibility ({},{},{})",
                                gd.nov.basis[i], gd.nov.basis[j], gd.nov.basis[k]
                            ),
                            tag(compat),
                        ));
                    }
                    Err(e) => report.push(CheckItem::flag(format!("({i},{j},{k}) [{e}]"), false)),
                }
            }
        }
    }
    report
}

/// The quadratic Lie conformal algebra of a verified GD bialgebra:
/// `[a λ b] = ∂(b∘a) + λ(a∘b + b∘a) + [b,a]`. The result is re-verified.
pub fn quadratic_from_gd(gd: &GdBialgebra) -> Result<LcaStructure, GdError> {
    if !gd.is_verified() {
        return Err(GdError::Unverified("gd bialgebra".into()));
    }
    let d = gd.dim();
    let ctx = gd.ctx();
    let module = CdModule::new(gd.nov.basis.clone());
    let mut table = vec![vec![vec![ctx.zero(); d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                let star = &gd.nov.mul[i][j][k] + &gd.nov.mul[j][i][k];
                let mut entry = gd.nov.mul[j][i][k].mul(&ctx.d())?;
                entry = &entry + &star.mul(&ctx.l())?;
                entry = &entry + &gd.lie[j][i][k];
                table[i][j][k] = entry;
            }
        }
    }
    let alg = LcaStructure::from_full_table(ctx, &module, table);
    alg.verify().map_err(|r| {
        GdError::Lift(LcaError::NotLie(format!(
            "quadratic table fails conformal axioms: {r}"
        )))
    })
}

/// Residual of the Nijenhuis condition on a Novikov algebra:
/// `N(N(a)∘b + a∘N(b) − N(a∘b)) − N(a)∘N(b)` per pair.
pub fn check_nijenhuis_novikov(
    nov: &NovikovAlgebra,
    n_mat: &[Vec<ScalarPoly>],
) -> Result<Report, GdError> {
    let d = nov.dim();
    if n_mat.len() != d || n_mat.iter().any(|r| r.len() != d) {
        return Err(GdError::DimensionMismatch);
    }
    validate_scalar_table(nov.ctx(), std::slice::from_ref(&n_mat.to_vec()))?;
    let ctx = nov.ctx();
    let apply = |x: &[ScalarPoly]| -> Result<Vec<ScalarPoly>, PolyError> {
        let mut out = vec![ctx.zero(); d];
        for (i, c) in x.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for k in 0..d {
                if !n_mat[i][k].is_zero() {
                    out[k] = &out[k] + &c.mul(&n_mat[i][k])?;
                }
            }
        }
        Ok(out)
    };
    let mut report = Report::new("nijenhuis-novikov", "N");
    for i in 0..d {
        for j in 0..d {
            let compute = || -> Result<Vec<ScalarPoly>, PolyError> {
                let a = basis_vec(ctx, d, i);
                let b = basis_vec(ctx, d, j);
                let na = apply(&a)?;
                let nb = apply(&b)?;
                let deformed = vec_sub(
                    &vec_add(&nov.mul_vec(&na, &b)?, &nov.mul_vec(&a, &nb)?),
                    &apply(&nov.mul_vec(&a, &b)?)?,
                );
                Ok(vec_sub(&apply(&deformed)?, &nov.mul_vec(&na, &nb)?))
            };
            match compute() {
                Ok(res) => report.push(CheckItem::residual(
                    format!("nijenhuis ({},{})", nov.basis[i], nov.basis[j]),
                    res.into_iter()
                        .enumerate()
                        .map(|(c, p)| (nov.basis[c].clone(), p))
                        .collect(),
                )),
                Err(e) => report.push(CheckItem::flag(format!("({i},{j}) [{e}]"), false)),
            }
        }
    }
    Ok(report)
}

/// The deformed multiplication `a ∘_N b = N(a)∘b + a∘N(b) − N(a∘b)`.
pub fn deformed_novikov(
    nov: &NovikovAlgebra,
    n_mat: &[Vec<ScalarPoly>],
) -> Result<NovikovAlgebra, GdError> {
    let d = nov.dim();
    let ctx = nov.ctx();
    let apply = |x: &[ScalarPoly]| -> Result<Vec<ScalarPoly>, PolyError> {
        let mut out = vec![ctx.zero(); d];
        for (i, c) in x.iter().enumerate() {
            for k in 0..d {
                if !c.is_zero() && !n_mat[i][k].is_zero() {
                    out[k] = &out[k] + &c.mul(&n_mat[i][k])?;
                }
            }
        }
        Ok(out)
    };
    let mut mul = vec![vec![vec![ctx.zero(); d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            let a = basis_vec(ctx, d, i);
            let b = basis_vec(ctx, d, j);
            let na = apply(&a)?;
            let nb = apply(&b)?;
            let deformed = vec_sub(
                &vec_add(&nov.mul_vec(&na, &b)?, &nov.mul_vec(&a, &nb)?),
                &apply(&nov.mul_vec(&a, &b)?)?,
            );
            mul[i][j] = deformed;
        }
    }
    NovikovAlgebra::new(ctx, nov.basis.clone(), mul)
}

/// The deformed GD data `([·,·]_N, ∘_N)`.
pub fn deformed_gd(gd: &GdBialgebra, n_mat: &[Vec<ScalarPoly>]) -> Result<GdBialgebra, GdError> {
    let d = gd.dim();
    let ctx = gd.ctx();
    let nov = deformed_novikov(&gd.nov, n_mat)?;
    let apply = |x: &[ScalarPoly]| -> Result<Vec<ScalarPoly>, PolyError> {
        let mut out = vec![ctx.zero(); d];
        for (i, c) in x.iter().enumerate() {
            for k in 0..d {
                if !c.is_zero() && !n_mat[i][k].is_zero() {
                    out[k] = &out[k] + &c.mul(&n_mat[i][k])?;
                }
            }
        }
        Ok(out)
    };
    let mut lie = vec![vec![vec![ctx.zero(); d]; d]; d];
    for i in 0..d {
        for j in 0..d {
            let a = basis_vec(ctx, d, i);
            let b = basis_vec(ctx, d, j);
            let na = apply(&a)?;
            let nb = apply(&b)?;
            let deformed = vec_sub(
                &vec_add(&gd.lie_vec(&na, &b)?, &gd.lie_vec(&a, &nb)?),
                &apply(&gd.lie_vec(&a, &b)?)?,
            );
            lie[i][j] = deformed;
        }
    }
    GdBialgebra::new(nov, lie)
}

/// Nijenhuis check on a GD bialgebra: both the Lie-algebra residual
/// `N([Na,b]+[a,Nb]−N[a,b]) − [Na,Nb]` and the Novikov residual must vanish.
pub fn check_nijenhuis_gd(gd: &GdBialgebra, n_mat: &[Vec<ScalarPoly>]) -> Result<Report, GdError> {
    let d = gd.dim();
    let ctx = gd.ctx();
    let apply = |x: &[ScalarPoly]| -> Result<Vec<ScalarPoly>, PolyError> {
        let mut out = vec![ctx.zero(); d];
        for (i, c) in x.iter().enumerate() {
            for k in 0..d {
                if !c.is_zero() && !n_mat[i][k].is_zero() {
                    out[k] = &out[k] + &c.mul(&n_mat[i][k])?;
                }
            }
        }
        Ok(out)
    };
    let mut report = Report::new("nijenhuis-gd", "N");
    report.absorb("novikov", check_nijenhuis_novikov(&gd.nov, n_mat)?);
    for i in 0..d {
        for j in 0..d {
            let compute = || -> Result<Vec<ScalarPoly>, PolyError> {
                let a = basis_vec(ctx, d, i);
                let b = basis_vec(ctx, d, j);
                let na = apply(&a)?;
                let nb = apply(&b)?;
                let deformed = vec_sub(
                    &vec_add(&gd.lie_vec(&na, &b)?, &gd.lie_vec(&a, &nb)?),
                    &apply(&gd.lie_vec(&a, &b)?)?,
                );
                Ok(vec_sub(&apply(&deformed)?, &gd.lie_vec(&na, &nb)?))
            };
            match compute() {
                Ok(res) => report.push(CheckItem::residual(
                    format!("lie-nijenhuis ({},{})", gd.nov.basis[i], gd.nov.basis[j]),
                    res.into_iter()
                        .enumerate()
                        .map(|(c, p)| (gd.nov.basis[c].clone(), p))
                        .collect(),
                )),
                Err(e) => report.push(CheckItem::flag(format!("({i},{j}) [{e}]"), false)),
            }
        }
    }
    Ok(report)
}

/// Lift of a scalar matrix to the constant-coefficient ℂ[∂]-endomorphism
/// `Ñ(f(∂)a) = f(∂)N(a)` on the quadratic algebra's module.
pub fn lift_hom(
    lifted: &LcaStructure,
    n_mat: &[Vec<ScalarPoly>],
) -> Result<CdHom, GdError> {
    let module = lifted.module();
    if n_mat.len() != module.rank() {
        return Err(GdError::DimensionMismatch);
    }
    CdHom::new(lifted.ctx(), module, module, n_mat.to_vec())
        .map_err(|e| GdError::ForbiddenSymbol(e.to_string()))
}
