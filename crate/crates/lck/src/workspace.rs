//! Resolution of a parsed file into live kernel objects, plus check
//! execution. Names are unique per workspace; declarations and `let`
//! constructions evaluate in file order, and every check reference is
//! resolved before any check runs.

use crate::ast::*;
use crate::lex::Pos;
use crate::parse::{parse_file, ParseError};
use lck_core::freemod::{CdHom, CdModule, ElemPoly};
use lck_core::gdnov::{
    check_gd, check_nijenhuis_gd, check_nijenhuis_novikov, check_novikov, lift_hom,
    quadratic_from_gd, GdBialgebra, NovikovAlgebra,
};
use lck_core::lca::{deformed_bracket, semidirect, LcaStructure};
use lck_core::nijenhuis::{check_nijenhuis_operator, check_nijenhuis_structure};
use lck_core::ooperator::{
    check_compatible, check_o_operator, check_on_structure, hierarchy, subadjacent,
};
use lck_core::poly::{Context, ScalarPoly, SymbolKind};
use lck_core::rep::{adjoint, coadjoint, trivial, RepStructure};
use lck_core::report::{Report, Verdict};
use lck_core::symplectic::{
    check_sn_structure, check_symplectic, o_from_symplectic, omega_n, TwoForm,
};
use lck_core::ybe::{check_rmatrix_nijenhuis, cybe_check, r_from_symplectic, Tensor2};
use std::sync::Arc;

const RESERVED: [&str; 6] = ["D", "L", "M", "D1", "D2", "D3"];

#[derive(Debug, Clone, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{pos}: {message}")]
    Resolve { pos: Pos, message: String },
}

fn resolve_err<T>(pos: Pos, message: impl Into<String>) -> Result<T, LoadError> {
    Err(LoadError::Resolve {
        pos,
        message: message.into(),
    })
}

/// Where a map's source/target lives, for report wiring and emission.
#[derive(Debug, Clone)]
pub struct MapObj {
    pub source: String,
    pub target: String,
    pub hom: CdHom,
}

#[derive(Clone)]
pub enum ObjectData {
    Algebra(Arc<LcaStructure>),
    Module(Arc<RepStructure>),
    Map(MapObj),
    /// A scalar matrix on a Novikov/GD space.
    ScalarMap { on: String, mat: Vec<Vec<ScalarPoly>> },
    Tensor(Tensor2),
    Form(TwoForm),
    Novikov(NovikovAlgebra),
    Gd(GdBialgebra),
}

impl ObjectData {
    pub fn kind(&self) -> &'static str {
        match self {
            ObjectData::Algebra(_) => "algebra",
            ObjectData::Module(_) => "module",
            ObjectData::Map(_) => "map",
            ObjectData::ScalarMap { .. } => "map",
            ObjectData::Tensor(_) => "tensor",
            ObjectData::Form(_) => "form",
            ObjectData::Novikov(_) => "novikov",
            ObjectData::Gd(_) => "gd",
        }
    }
}

pub struct WsObject {
    pub name: String,
    pub data: ObjectData,
}

impl std::fmt::Debug for Workspace {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Workspace(")?;
        for (i, o) in self.objects.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{} {}", o.data.kind(), o.name)?;
        }
        write!(f, "; {} checks)", self.checks.len())
    }
}

pub struct Workspace {
    pub ctx: Context,
    pub objects: Vec<WsObject>,
    pub checks: Vec<CheckStmt>,
}

enum Value {
    Scalar(ScalarPoly),
    Elem(ElemPoly),
    Tensor(Vec<Vec<ScalarPoly>>),
}

struct EvalEnv<'a> {
    ctx: &'a Context,
    /// current space for basis-name resolution
    module: Option<&'a Arc<CdModule>>,
}

impl<'a> EvalEnv<'a> {
    fn eval(&self, e: &Expr) -> Result<Value, LoadError> {
        match e {
            Expr::Int(n) => Ok(Value::Scalar(self.ctx.int(*n))),
            Expr::Ident(name, pos) => {
                if let Some(idx) = self.ctx.lookup(name) {
                    return Ok(Value::Scalar(self.ctx.sym(idx)));
                }
                if let Some(m) = self.module {
                    if let Some(i) = m.basis.iter().position(|b| b == name) {
                        return Ok(Value::Elem(ElemPoly::basis(self.ctx, m, i)));
                    }
                }
                resolve_err(*pos, format!("unknown identifier `{name}`"))
            }
            Expr::Neg(inner) => match self.eval(inner)? {
                Value::Scalar(p) => Ok(Value::Scalar(-&p)),
                Value::Elem(v) => Ok(Value::Elem(-&v)),
                Value::Tensor(t) => Ok(Value::Tensor(
                    t.iter().map(|r| r.iter().map(|p| -p).collect()).collect(),
                )),
            },
            Expr::Add(a, b) => self.combine(a, b, "+"),
            Expr::Sub(a, b) => self.combine(a, b, "-"),
            Expr::Mul(a, b) => self.multiply(a, b),
            Expr::Div(a, b, pos) => {
                let lhs = self.eval(a)?;
                let rhs = self.eval(b)?;
                let Value::Scalar(d) = rhs else {
                    return resolve_err(*pos, "division requires a scalar divisor");
                };
                if !d.is_unit_constant() {
                    return resolve_err(*pos, "division only by nonzero rational constants");
                }
                let inv = d.constant_term().recip();
                match lhs {
                    Value::Scalar(p) => Ok(Value::Scalar(p.scale(&inv))),
                    Value::Elem(v) => Ok(Value::Elem(ElemPoly::from_coeffs(
                        &v.module,
                        v.coeffs.iter().map(|c| c.scale(&inv)).collect(),
                    ))),
                    Value::Tensor(t) => Ok(Value::Tensor(
                        t.iter()
                            .map(|r| r.iter().map(|p| p.scale(&inv)).collect())
                            .collect(),
                    )),
                }
            }
            Expr::Pow(a, n, pos) => match self.eval(a)? {
                Value::Scalar(p) => p
                    .pow(*n)
                    .map(Value::Scalar)
                    .or_else(|e| resolve_err(*pos, e.to_string())),
                _ => resolve_err(*pos, "exponentiation applies to scalars only"),
            },
            Expr::Otimes(a, b, pos) => {
                let (Value::Elem(u), Value::Elem(v)) = (self.eval(a)?, self.eval(b)?) else {
                    return resolve_err(*pos, "(x) combines two module elements");
                };
                let n = u.module.rank();
                let mut t = vec![vec![self.ctx.zero(); n]; n];
                for i in 0..n {
                    for j in 0..n {
                        if u.coeffs[i].is_zero() || v.coeffs[j].is_zero() {
                            continue;
                        }
                        t[i][j] = u.coeffs[i].mul(&v.coeffs[j]).map_err(|e| {
                            LoadError::Resolve {
                                pos: *pos,
                                message: e.to_string(),
                            }
                        })?;
                    }
                }
                Ok(Value::Tensor(t))
            }
        }
    }

    fn combine(&self, a: &Expr, b: &Expr, op: &str) -> Result<Value, LoadError> {
        let lhs = self.eval(a)?;
        let rhs = self.eval(b)?;
        let err_pos = expr_pos(b);
        match (lhs, rhs) {
            (Value::Scalar(p), Value::Scalar(q)) => Ok(Value::Scalar(if op == "+" {
                &p + &q
            } else {
                &p - &q
            })),
            (Value::Elem(u), Value::Elem(v)) => {
                if u.module != v.module {
                    return resolve_err(err_pos, "elements of different spaces");
                }
                Ok(Value::Elem(if op == "+" { &u + &v } else { &u - &v }))
            }
            (Value::Tensor(s), Value::Tensor(t)) => Ok(Value::Tensor(
                s.iter()
                    .zip(&t)
                    .map(|(r1, r2)| {
                        r1.iter()
                            .zip(r2)
                            .map(|(p, q)| if op == "+" { p + q } else { p - q })
                            .collect()
                    })
                    .collect(),
            )),
            _ => resolve_err(err_pos, "mismatched operand kinds"),
        }
    }

    fn multiply(&self, a: &Expr, b: &Expr) -> Result<Value, LoadError> {
        let lhs = self.eval(a)?;
        let rhs = self.eval(b)?;
        let err_pos = expr_pos(b);
        let mul_err = |e: lck_core::PolyError| LoadError::Resolve {
            pos: err_pos,
            message: e.to_string(),
        };
        match (lhs, rhs) {
            (Value::Scalar(p), Value::Scalar(q)) => Ok(Value::Scalar(p.mul(&q).map_err(mul_err)?)),
            (Value::Scalar(p), Value::Elem(v)) | (Value::Elem(v), Value::Scalar(p)) => {
                Ok(Value::Elem(v.scale(&p).map_err(mul_err)?))
            }
            (Value::Scalar(p), Value::Tensor(t)) | (Value::Tensor(t), Value::Scalar(p)) => {
                Ok(Value::Tensor(
                    t.iter()
                        .map(|r| r.iter().map(|q| q.mul(&p)).collect::<Result<_, _>>())
                        .collect::<Result<_, _>>()
                        .map_err(mul_err)?,
                ))
            }
            _ => resolve_err(err_pos, "cannot multiply these operands"),
        }
    }
}

fn expr_pos(e: &Expr) -> Pos {
    match e {
        Expr::Ident(_, p) | Expr::Div(_, _, p) | Expr::Pow(_, _, p) | Expr::Otimes(_, _, p) => *p,
        Expr::Neg(inner) => expr_pos(inner),
        Expr::Add(a, _) | Expr::Sub(a, _) | Expr::Mul(a, _) => expr_pos(a),
        Expr::Int(_) => Pos { line: 0, col: 0 },
    }
}

impl Workspace {
    pub fn parse(src: &str) -> Result<Workspace, LoadError> {
        let file = parse_file(src)?;
        Self::load(file)
    }

    pub fn load(file: File) -> Result<Workspace, LoadError> {
        // collect all scalar parameters first; the symbol table is fixed per file
        let mut params: Vec<String> = Vec::new();
        for item in &file.items {
            if let Item::Scalars(names) = item {
                for n in names {
                    if RESERVED.contains(&n.as_str()) {
                        return resolve_err(
                            Pos { line: 0, col: 0 },
                            format!("`{n}` is a reserved symbol"),
                        );
                    }
                    if !params.contains(n) {
                        params.push(n.clone());
                    }
                }
            }
        }
        let param_refs: Vec<&str> = params.iter().map(|s| s.as_str()).collect();
        let ctx = Context::standard(&param_refs);
        let mut ws = Workspace {
            ctx,
            objects: Vec::new(),
            checks: Vec::new(),
        };
        for item in file.items {
            ws.load_item(item)?;
        }
        // every check reference must resolve before any check runs
        for chk in &ws.checks {
            for arg in &chk.args {
                if ws.lookup(arg).is_none() {
                    return resolve_err(chk.pos, format!("check references unknown object `{arg}`"));
                }
            }
        }
        Ok(ws)
    }

    pub fn lookup(&self, name: &str) -> Option<&WsObject> {
        self.objects.iter().find(|o| o.name == name)
    }

    fn insert(&mut self, pos: Pos, name: String, data: ObjectData) -> Result<(), LoadError> {
        if self.lookup(&name).is_some() {
            return resolve_err(pos, format!("duplicate object name `{name}`"));
        }
        self.objects.push(WsObject { name, data });
        Ok(())
    }

    fn validate_basis(&self, pos: Pos, basis: &[String], rank: usize) -> Result<(), LoadError> {
        if basis.len() != rank {
            return resolve_err(
                pos,
                format!("rank {} does not match {} basis names", rank, basis.len()),
            );
        }
        let mut seen = std::collections::BTreeSet::new();
        for b in basis {
            if RESERVED.contains(&b.as_str()) || self.ctx.lookup(b).is_some() {
                return resolve_err(
                    pos,
                    format!("basis name `{b}` collides with a symbol or parameter"),
                );
            }
            if !seen.insert(b) {
                return resolve_err(pos, format!("duplicate basis name `{b}`"));
            }
        }
        Ok(())
    }

    fn get_algebra(&self, pos: Pos, name: &str) -> Result<Arc<LcaStructure>, LoadError> {
        match self.lookup(name) {
            Some(WsObject {
                data: ObjectData::Algebra(a),
                ..
            }) => Ok(a.clone()),
            Some(o) => resolve_err(pos, format!("`{name}` is a {}, not an algebra", o.data.kind())),
            None => resolve_err(pos, format!("unknown algebra `{name}`")),
        }
    }

    fn get_module(&self, pos: Pos, name: &str) -> Result<Arc<RepStructure>, LoadError> {
        match self.lookup(name) {
            Some(WsObject {
                data: ObjectData::Module(m),
                ..
            }) => Ok(m.clone()),
            Some(o) => resolve_err(pos, format!("`{name}` is a {}, not a module", o.data.kind())),
            None => resolve_err(pos, format!("unknown module `{name}`")),
        }
    }

    fn get_map(&self, pos: Pos, name: &str) -> Result<MapObj, LoadError> {
        match self.lookup(name) {
            Some(WsObject {
                data: ObjectData::Map(m),
                ..
            }) => Ok(m.clone()),
            Some(o) => resolve_err(pos, format!("`{name}` is a {}, not a map", o.data.kind())),
            None => resolve_err(pos, format!("unknown map `{name}`")),
        }
    }

    /// The underlying free module of an algebra or module object.
    fn space_of(&self, pos: Pos, name: &str) -> Result<Arc<CdModule>, LoadError> {
        match self.lookup(name) {
            Some(WsObject {
                data: ObjectData::Algebra(a),
                ..
            }) => Ok(a.module().clone()),
            Some(WsObject {
                data: ObjectData::Module(m),
                ..
            }) => Ok(m.module().clone()),
            Some(o) => resolve_err(
                pos,
                format!("`{name}` is a {}, which carries no free module", o.data.kind()),
            ),
            None => resolve_err(pos, format!("unknown object `{name}`")),
        }
    }

    fn load_item(&mut self, item: Item) -> Result<(), LoadError> {
        match item {
            Item::Scalars(_) => Ok(()),
            Item::Algebra(d) => self.load_algebra(d),
            Item::Module(d) => self.load_module(d),
            Item::Map(d) => self.load_map(d),
            Item::Tensor(d) => self.load_tensor(d),
            Item::Form(d) => self.load_form(d),
            Item::Novikov(d) => self.load_novikov(d),
            Item::Gd(d) => self.load_gd(d),
            Item::Let {
                name,
                construction,
                pos,
            } => self.load_let(name, construction, pos),
            Item::Check(c) => {
                self.checks.push(c);
                Ok(())
            }
        }
    }

    fn elem_entry(
        &self,
        module: &Arc<CdModule>,
        expr: &Expr,
        pos: Pos,
    ) -> Result<Vec<ScalarPoly>, LoadError> {
        let env = EvalEnv {
            ctx: &self.ctx,
            module: Some(module),
        };
        match env.eval(expr)? {
            Value::Elem(v) => Ok(v.coeffs),
            Value::Scalar(p) if p.is_zero() => Ok(vec![self.ctx.zero(); module.rank()]),
            _ => resolve_err(pos, "entry must be a module element (or 0)"),
        }
    }

    fn load_algebra(&mut self, d: AlgebraDecl) -> Result<(), LoadError> {
        let pos = d
            .entries
            .first()
            .map(|e| e.3)
            .unwrap_or(Pos { line: 0, col: 0 });
        self.validate_basis(pos, &d.basis, d.rank)?;
        let module = CdModule::new(d.basis.clone());
        let mut entries = Vec::new();
        for (a, b, expr, epos) in &d.entries {
            let i = basis_index(&d.basis, a, *epos)?;
            let j = basis_index(&d.basis, b, *epos)?;
            let coeffs = self.elem_entry(&module, expr, *epos)?;
            entries.push(((i, j), coeffs));
        }
        let alg = LcaStructure::from_entries(&self.ctx, &module, entries)
            .map_err(|e| LoadError::Resolve {
                pos,
                message: e.to_string(),
            })?;
        // verify eagerly; a failing table is kept unverified so that a later
        // `check lca` reports the residuals
        let alg = alg.clone().verify().unwrap_or(alg);
        self.insert(pos, d.name, ObjectData::Algebra(Arc::new(alg)))
    }

    fn load_module(&mut self, d: ModuleDecl) -> Result<(), LoadError> {
        let pos = d
            .entries
            .first()
            .map(|e| e.3)
            .unwrap_or(Pos { line: 0, col: 0 });
        self.validate_basis(pos, &d.basis, d.rank)?;
        let algebra = self.get_algebra(pos, &d.over)?;
        let module = CdModule::new(d.basis.clone());
        let n = algebra.rank();
        let m = module.rank();
        let mut table = vec![vec![vec![self.ctx.zero(); m]; m]; n];
        for (gen, vecname, expr, epos) in &d.entries {
            let i = basis_index(&algebra.module().basis, gen, *epos)?;
            let j = basis_index(&d.basis, vecname, *epos)?;
            table[i][j] = self.elem_entry(&module, expr, *epos)?;
        }
        let rep = RepStructure::new(&algebra, &module, table).map_err(|e| LoadError::Resolve {
            pos,
            message: e.to_string(),
        })?;
        // keep an unverified copy on failure; `check module` reports details
        let rep = rep.clone().verify().unwrap_or(rep);
        self.insert(pos, d.name, ObjectData::Module(Arc::new(rep)))
    }

    fn load_map(&mut self, d: MapDecl) -> Result<(), LoadError> {
        let pos = d
            .entries
            .first()
            .map(|e| e.2)
            .unwrap_or(Pos { line: 0, col: 0 });
        // maps on Novikov/GD spaces become scalar matrices
        if let Some(WsObject {
            data: ObjectData::Novikov(_) | ObjectData::Gd(_),
            ..
        }) = self.lookup(&d.source)
        {
            if d.source != d.target {
                return resolve_err(pos, "scalar maps must be endomorphisms");
            }
            let basis = match &self.lookup(&d.source).unwrap().data {
                ObjectData::Novikov(nv) => nv.basis.clone(),
                ObjectData::Gd(gd) => gd.nov.basis.clone(),
                _ => unreachable!(),
            };
            let dim = basis.len();
            let space = CdModule::new(basis.clone());
            let mut mat = vec![vec![self.ctx.zero(); dim]; dim];
            for (gen, expr, epos) in &d.entries {
                let i = basis_index(&basis, gen, *epos)?;
                let row = self.elem_entry(&space, expr, *epos)?;
                for (j, p) in row.iter().enumerate() {
                    if !p.uses_only(|_, k| k == SymbolKind::Param) {
                        return resolve_err(
                            *epos,
                            "scalar map entries may use parameters only".to_string(),
                        );
                    }
                    mat[i][j] = p.clone();
                }
            }
            return self.insert(
                pos,
                d.name,
                ObjectData::ScalarMap {
                    on: d.source,
                    mat,
                },
            );
        }
        let source = self.space_of(pos, &d.source)?;
        let target = self.space_of(pos, &d.target)?;
        let mut mat = vec![vec![self.ctx.zero(); target.rank()]; source.rank()];
        for (gen, expr, epos) in &d.entries {
            let i = basis_index(&source.basis, gen, *epos)?;
            mat[i] = self.elem_entry(&target, expr, *epos)?;
        }
        let hom =
            CdHom::new(&self.ctx, &source, &target, mat).map_err(|e| LoadError::Resolve {
                pos,
                message: e.to_string(),
            })?;
        self.insert(
            pos,
            d.name,
            ObjectData::Map(MapObj {
                source: d.source,
                target: d.target,
                hom,
            }),
        )
    }

    fn load_tensor(&mut self, d: TensorDecl) -> Result<(), LoadError> {
        let algebra = self.get_algebra(d.pos, &d.algebra)?;
        let env = EvalEnv {
            ctx: &self.ctx,
            module: Some(algebra.module()),
        };
        let coeffs = match env.eval(&d.expr)? {
            Value::Tensor(t) => t,
            Value::Scalar(p) if p.is_zero() => {
                vec![vec![self.ctx.zero(); algebra.rank()]; algebra.rank()]
            }
            _ => return resolve_err(d.pos, "tensor expression must be a sum of (x) products"),
        };
        let tensor = Tensor2::new(&algebra, coeffs).map_err(|e| LoadError::Resolve {
            pos: d.pos,
            message: e.to_string(),
        })?;
        self.insert(d.pos, d.name, ObjectData::Tensor(tensor))
    }

    fn load_form(&mut self, d: FormDecl) -> Result<(), LoadError> {
        let pos = d
            .entries
            .first()
            .map(|e| e.3)
            .unwrap_or(Pos { line: 0, col: 0 });
        let algebra = self.get_algebra(pos, &d.on)?;
        let n = algebra.rank();
        let basis = &algebra.module().basis;
        let mut table: Vec<Vec<Option<ScalarPoly>>> = vec![vec![None; n]; n];
        let env = EvalEnv {
            ctx: &self.ctx,
            module: None,
        };
        for (a, b, expr, epos) in &d.entries {
            let i = basis_index(basis, a, *epos)?;
            let j = basis_index(basis, b, *epos)?;
            let Value::Scalar(p) = env.eval(expr)? else {
                return resolve_err(*epos, "form entries are scalar polynomials in L");
            };
            table[i][j] = Some(p);
        }
        // synthesize the missing mirror entries by skew-symmetry
        for i in 0..n {
            for j in 0..n {
                if let (Some(p), None) = (table[i][j].clone(), &table[j][i]) {
                    if i != j {
                        table[j][i] = Some(-&p);
                    }
                }
            }
        }
        let full: Vec<Vec<ScalarPoly>> = table
            .into_iter()
            .map(|row| row.into_iter().map(|e| e.unwrap_or(self.ctx.zero())).collect())
            .collect();
        let form = TwoForm::new(&algebra, full).map_err(|e| LoadError::Resolve {
            pos,
            message: e.to_string(),
        })?;
        self.insert(pos, d.name, ObjectData::Form(form))
    }

    fn scalar_table(
        &self,
        basis: &[String],
        entries: &[(String, String, Expr, Pos)],
    ) -> Result<Vec<Vec<Vec<ScalarPoly>>>, LoadError> {
        let dim = basis.len();
        let space = CdModule::new(basis.to_vec());
        let mut table = vec![vec![vec![self.ctx.zero(); dim]; dim]; dim];
        for (a, b, expr, epos) in entries {
            let i = basis_index(basis, a, *epos)?;
            let j = basis_index(basis, b, *epos)?;
            let row = self.elem_entry(&space, expr, *epos)?;
            for p in &row {
                if !p.uses_only(|_, k| k == SymbolKind::Param) {
                    return resolve_err(*epos, "entries must be scalar (parameters only)");
                }
            }
            table[i][j] = row;
        }
        Ok(table)
    }

    fn load_novikov(&mut self, d: NovikovDecl) -> Result<(), LoadError> {
        let pos = d
            .products
            .first()
            .map(|e| e.3)
            .unwrap_or(Pos { line: 0, col: 0 });
        self.validate_basis(pos, &d.basis, d.dim)?;
        let mul = self.scalar_table(&d.basis, &d.products)?;
        let nov = NovikovAlgebra::new(&self.ctx, d.basis, mul).map_err(|e| LoadError::Resolve {
            pos,
            message: e.to_string(),
        })?;
        let nov = nov.verify().unwrap_or_else(|_| {
            panic!("unverified Novikov tables are reported through `check novikov`")
        });
        self.insert(pos, d.name, ObjectData::Novikov(nov))
    }

    fn load_gd(&mut self, d: GdDecl) -> Result<(), LoadError> {
        let pos = d
            .products
            .first()
            .or(d.brackets.first())
            .map(|e| e.3)
            .unwrap_or(Pos { line: 0, col: 0 });
        self.validate_basis(pos, &d.basis, d.dim)?;
        let mul = self.scalar_table(&d.basis, &d.products)?;
        let nov =
            NovikovAlgebra::new(&self.ctx, d.basis.clone(), mul).map_err(|e| LoadError::Resolve {
                pos,
                message: e.to_string(),
            })?;
        let nov = nov.verify().map_err(|r| LoadError::Resolve {
            pos,
            message: format!("novikov part fails its axioms:\n{r}"),
        })?;
        let mut lie = self.scalar_table(&d.basis, &d.brackets)?;
        // antisymmetric completion of omitted mirror entries
        let dim = d.basis.len();
        let explicit: std::collections::BTreeSet<(usize, usize)> = d
            .brackets
            .iter()
            .map(|(a, b, _, epos)| {
                Ok((
                    basis_index(&d.basis, a, *epos)?,
                    basis_index(&d.basis, b, *epos)?,
                ))
            })
            .collect::<Result<_, LoadError>>()?;
        for i in 0..dim {
            for j in 0..dim {
                if explicit.contains(&(i, j)) && !explicit.contains(&(j, i)) && i != j {
                    lie[j][i] = lie[i][j].iter().map(|p| -p).collect();
                }
            }
        }
        let gd = GdBialgebra::new(nov, lie).map_err(|e| LoadError::Resolve {
            pos,
            message: e.to_string(),
        })?;
        let gd = gd.verify().map_err(|r| LoadError::Resolve {
            pos,
            message: format!("gd bialgebra fails its axioms:\n{r}"),
        })?;
        self.insert(pos, d.name, ObjectData::Gd(gd))
    }

    fn load_let(
        &mut self,
        name: String,
        construction: Construction,
        pos: Pos,
    ) -> Result<(), LoadError> {
        let fail = |e: String| LoadError::Resolve { pos, message: e };
        match construction {
            Construction::Deform { algebra, map } => {
                let alg = self.get_algebra(pos, &algebra)?;
                let m = self.get_map(pos, &map)?;
                let def =
                    deformed_bracket(&alg, &m.hom).map_err(|e| fail(e.to_string()))?;
                let def = def.clone().verify().unwrap_or(def);
                self.insert(pos, name, ObjectData::Algebra(Arc::new(def)))
            }
            Construction::Semidirect { algebra, module } => {
                let alg = self.get_algebra(pos, &algebra)?;
                let rep = self.get_module(pos, &module)?;
                let d = semidirect(&alg, &rep).map_err(|e| fail(e.to_string()))?;
                self.insert(pos, name, ObjectData::Algebra(Arc::new(d)))
            }
            Construction::Adjoint { algebra } => {
                let alg = self.get_algebra(pos, &algebra)?;
                let rep = adjoint(&alg).map_err(|e| fail(e.to_string()))?;
                self.insert(pos, name, ObjectData::Module(Arc::new(rep)))
            }
            Construction::Coadjoint { module } => {
                let rep = self.get_module(pos, &module)?;
                let co = coadjoint(&rep).map_err(|e| fail(e.to_string()))?;
                self.insert(pos, name, ObjectData::Module(Arc::new(co)))
            }
            Construction::Trivial { algebra, rank } => {
                let alg = self.get_algebra(pos, &algebra)?;
                let rep = trivial(&alg, rank).map_err(|e| fail(e.to_string()))?;
                self.insert(pos, name, ObjectData::Module(Arc::new(rep)))
            }
            Construction::Quadratic { gd } => {
                let gd_obj = match self.lookup(&gd) {
                    Some(WsObject {
                        data: ObjectData::Gd(g),
                        ..
                    }) => g.clone(),
                    _ => return resolve_err(pos, format!("unknown gd bialgebra `{gd}`")),
                };
                let alg = quadratic_from_gd(&gd_obj).map_err(|e| fail(e.to_string()))?;
                self.insert(pos, name, ObjectData::Algebra(Arc::new(alg)))
            }
            Construction::Dual { map } => {
                let m = self.get_map(pos, &map)?;
                let d = m.hom.dual().map_err(|e| fail(e.to_string()))?;
                self.insert(
                    pos,
                    name,
                    ObjectData::Map(MapObj {
                        source: format!("{}'", m.source),
                        target: format!("{}'", m.target),
                        hom: d,
                    }),
                )
            }
            Construction::OInv { form, module } => {
                let f = match self.lookup(&form) {
                    Some(WsObject {
                        data: ObjectData::Form(f),
                        ..
                    }) => f.clone(),
                    _ => return resolve_err(pos, format!("unknown form `{form}`")),
                };
                let rep = self.get_module(pos, &module)?;
                let t = f
                    .omega_natural()
                    .and_then(|h| Ok(h.invert()?))
                    .map_err(|e| fail(e.to_string()))?;
                if *rep.module() != t.source {
                    return resolve_err(
                        pos,
                        format!(
                            "module `{module}` does not carry the dual basis of the form's algebra"
                        ),
                    );
                }
                // the target is the algebra object the form lives on
                let target = self
                    .objects
                    .iter()
                    .find(|o| match &o.data {
                        ObjectData::Algebra(a) => Arc::ptr_eq(a, f.algebra()),
                        _ => false,
                    })
                    .map(|o| o.name.clone())
                    .unwrap_or_else(|| form.clone());
                self.insert(
                    pos,
                    name,
                    ObjectData::Map(MapObj {
                        source: module,
                        target,
                        hom: t,
                    }),
                )
            }
            Construction::Compose { first, second } => {
                let f = self.get_map(pos, &first)?;
                let g = self.get_map(pos, &second)?;
                let hom = f.hom.then(&g.hom).map_err(|e| fail(e.to_string()))?;
                self.insert(
                    pos,
                    name,
                    ObjectData::Map(MapObj {
                        source: f.source,
                        target: g.target,
                        hom,
                    }),
                )
            }
            Construction::Power { map, k } => {
                let m = self.get_map(pos, &map)?;
                let hom = m.hom.pow(k).map_err(|e| fail(e.to_string()))?;
                self.insert(
                    pos,
                    name,
                    ObjectData::Map(MapObj {
                        source: m.source,
                        target: m.target,
                        hom,
                    }),
                )
            }
            Construction::RSharp { tensor } => {
                let r = match self.lookup(&tensor) {
                    Some(WsObject {
                        data: ObjectData::Tensor(t),
                        ..
                    }) => t.clone(),
                    _ => return resolve_err(pos, format!("unknown tensor `{tensor}`")),
                };
                let hom = r.r_sharp0().map_err(|e| fail(e.to_string()))?;
                // source: a module object carrying the dual basis, if declared
                let source = self
                    .objects
                    .iter()
                    .find(|o| match &o.data {
                        ObjectData::Module(m) => *m.module() == hom.source,
                        _ => false,
                    })
                    .map(|o| o.name.clone())
                    .unwrap_or_else(|| format!("{tensor}'"));
                let target = self
                    .objects
                    .iter()
                    .find(|o| match &o.data {
                        ObjectData::Algebra(a) => a.module() == r.algebra.module(),
                        _ => false,
                    })
                    .map(|o| o.name.clone())
                    .unwrap_or_else(|| tensor.clone());
                self.insert(pos, name, ObjectData::Map(MapObj { source, target, hom }))
            }
            Construction::RDeform { tensor, map, k } => {
                let r = match self.lookup(&tensor) {
                    Some(WsObject {
                        data: ObjectData::Tensor(t),
                        ..
                    }) => t.clone(),
                    _ => return resolve_err(pos, format!("unknown tensor `{tensor}`")),
                };
                let m = self.get_map(pos, &map)?;
                let nk = m.hom.pow(k).map_err(|e| fail(e.to_string()))?;
                let rn = r.deform_by(&nk).map_err(|e| fail(e.to_string()))?;
                self.insert(pos, name, ObjectData::Tensor(rn))
            }
            Construction::OmegaN { form, map, k } => {
                let f = match self.lookup(&form) {
                    Some(WsObject {
                        data: ObjectData::Form(f),
                        ..
                    }) => f.clone(),
                    _ => return resolve_err(pos, format!("unknown form `{form}`")),
                };
                let m = self.get_map(pos, &map)?;
                let fk = omega_n(&f, &m.hom, k).map_err(|e| fail(e.to_string()))?;
                self.insert(pos, name, ObjectData::Form(fk))
            }
            Construction::RFromForm { form } => {
                let f = match self.lookup(&form) {
                    Some(WsObject {
                        data: ObjectData::Form(f),
                        ..
                    }) => f.clone(),
                    _ => return resolve_err(pos, format!("unknown form `{form}`")),
                };
                let r = r_from_symplectic(&f).map_err(|e| fail(e.to_string()))?;
                self.insert(pos, name, ObjectData::Tensor(r))
            }
            Construction::Lift { map, algebra } => {
                let alg = self.get_algebra(pos, &algebra)?;
                let mat = match self.lookup(&map) {
                    Some(WsObject {
                        data: ObjectData::ScalarMap { mat, .. },
                        ..
                    }) => mat.clone(),
                    _ => {
                        return resolve_err(
                            pos,
                            format!("`{map}` is not a scalar map on a novikov/gd space"),
                        )
                    }
                };
                let hom = lift_hom(&alg, &mat).map_err(|e| fail(e.to_string()))?;
                self.insert(
                    pos,
                    name,
                    ObjectData::Map(MapObj {
                        source: algebra.clone(),
                        target: algebra,
                        hom,
                    }),
                )
            }
        }
    }

    /// Executes one check statement; internal errors become error-verdict
    /// reports rather than aborting.
    pub fn run_check(&self, chk: &CheckStmt) -> Report {
        let subject = chk.args.join(" ");
        match self.dispatch(chk) {
            Ok(mut report) => {
                if !subject.is_empty() {
                    report.subject = subject;
                }
                report
            }
            Err(msg) => {
                let mut r = Report::new(chk.kind.clone(), subject);
                r.mark_error(msg);
                r
            }
        }
    }

    fn dispatch(&self, chk: &CheckStmt) -> Result<Report, String> {
        let pos = chk.pos;
        let need = |n: usize| -> Result<(), String> {
            if chk.args.len() == n {
                Ok(())
            } else {
                Err(format!(
                    "check {} takes {} argument(s), got {}",
                    chk.kind,
                    n,
                    chk.args.len()
                ))
            }
        };
        let subject = chk.args.join(" ");
        let estr = |e: LoadError| e.to_string();
        match chk.kind.as_str() {
            "lca" => {
                need(1)?;
                let a = self.get_algebra(pos, &chk.args[0]).map_err(estr)?;
                Ok(a.check_axioms(&chk.args[0]))
            }
            "module" => {
                need(1)?;
                let m = self.get_module(pos, &chk.args[0]).map_err(estr)?;
                Ok(m.check_axioms(&chk.args[0]))
            }
            "novikov" => {
                need(1)?;
                match self.lookup(&chk.args[0]) {
                    Some(WsObject {
                        data: ObjectData::Novikov(nv),
                        ..
                    }) => Ok(check_novikov(nv, &chk.args[0])),
                    _ => Err(format!("unknown novikov algebra `{}`", chk.args[0])),
                }
            }
            "gd" => {
                need(1)?;
                match self.lookup(&chk.args[0]) {
                    Some(WsObject {
                        data: ObjectData::Gd(gd),
                        ..
                    }) => Ok(check_gd(gd, &chk.args[0])),
                    _ => Err(format!("unknown gd bialgebra `{}`", chk.args[0])),
                }
            }
            "nijenhuis" => {
                need(2)?;
                let a = self.get_algebra(pos, &chk.args[0]).map_err(estr)?;
                let n = self.get_map(pos, &chk.args[1]).map_err(estr)?;
                Ok(check_nijenhuis_operator(&a, &n.hom))
            }
            "novnijenhuis" => {
                need(2)?;
                let nv = match self.lookup(&chk.args[0]) {
                    Some(WsObject {
                        data: ObjectData::Novikov(nv),
                        ..
                    }) => nv.clone(),
                    _ => return Err(format!("unknown novikov algebra `{}`", chk.args[0])),
                };
                let mat = self.scalar_map_on(&chk.args[1], &chk.args[0])?;
                check_nijenhuis_novikov(&nv, &mat).map_err(|e| e.to_string())
            }
            "gdnijenhuis" => {
                need(2)?;
                let gd = match self.lookup(&chk.args[0]) {
                    Some(WsObject {
                        data: ObjectData::Gd(gd),
                        ..
                    }) => gd.clone(),
                    _ => return Err(format!("unknown gd bialgebra `{}`", chk.args[0])),
                };
                let mat = self.scalar_map_on(&chk.args[1], &chk.args[0])?;
                check_nijenhuis_gd(&gd, &mat).map_err(|e| e.to_string())
            }
            "nijstructure" => {
                need(4)?;
                let a = self.get_algebra(pos, &chk.args[0]).map_err(estr)?;
                let v = self.get_module(pos, &chk.args[1]).map_err(estr)?;
                let n = self.get_map(pos, &chk.args[2]).map_err(estr)?;
                let s = self.get_map(pos, &chk.args[3]).map_err(estr)?;
                check_nijenhuis_structure(&a, &v, &n.hom, &s.hom).map_err(|e| e.to_string())
            }
            "ooperator" => {
                need(1)?;
                let (rep, t) = self.o_operator_pair(pos, &chk.args[0])?;
                Ok(check_o_operator(&rep, &t.hom, &subject))
            }
            "subadjacent" => {
                need(1)?;
                let (rep, t) = self.o_operator_pair(pos, &chk.args[0])?;
                let (_, report) =
                    subadjacent(&rep, &t.hom, &subject).map_err(|e| e.to_string())?;
                Ok(report)
            }
            "compatible" => {
                need(2)?;
                let (rep, t1) = self.o_operator_pair(pos, &chk.args[0])?;
                let t2 = self.get_map(pos, &chk.args[1]).map_err(estr)?;
                check_compatible(&rep, &t1.hom, &t2.hom, &subject).map_err(|e| e.to_string())
            }
            "on-structure" => {
                need(3)?;
                let (rep, t) = self.o_operator_pair(pos, &chk.args[0])?;
                let n = self.get_map(pos, &chk.args[1]).map_err(estr)?;
                let s = self.get_map(pos, &chk.args[2]).map_err(estr)?;
                check_on_structure(&rep, &t.hom, &n.hom, &s.hom, &subject)
                    .map_err(|e| e.to_string())
            }
            "hierarchy" => {
                need(3)?;
                let kmax = chk.kmax.ok_or("hierarchy requires a kmax integer")?;
                let (rep, t) = self.o_operator_pair(pos, &chk.args[0])?;
                let n = self.get_map(pos, &chk.args[1]).map_err(estr)?;
                let s = self.get_map(pos, &chk.args[2]).map_err(estr)?;
                hierarchy(&rep, &t.hom, &n.hom, &s.hom, kmax, &subject)
                    .map(|(_, r)| r)
                    .map_err(|e| e.to_string())
            }
            "skew" => {
                need(1)?;
                let r = self.tensor(&chk.args[0])?;
                Ok(r.is_skew(&chk.args[0]))
            }
            "cybe" => {
                need(1)?;
                let r = self.tensor(&chk.args[0])?;
                cybe_check(&r, &chk.args[0]).map_err(|e| e.to_string())
            }
            "rmatrix-nijenhuis" => {
                need(2)?;
                let r = self.tensor(&chk.args[0])?;
                let n = self.get_map(pos, &chk.args[1]).map_err(estr)?;
                check_rmatrix_nijenhuis(&r, &n.hom, &subject).map_err(|e| e.to_string())
            }
            "nondegenerate-r" => {
                need(1)?;
                let r = self.tensor(&chk.args[0])?;
                r.is_nondegenerate(&chk.args[0]).map_err(|e| e.to_string())
            }
            "symplectic" => {
                need(1)?;
                let f = self.form(&chk.args[0])?;
                check_symplectic(&f, &chk.args[0]).map_err(|e| e.to_string())
            }
            "sn-structure" => {
                need(2)?;
                let f = self.form(&chk.args[0])?;
                let n = self.get_map(pos, &chk.args[1]).map_err(estr)?;
                check_sn_structure(&f, &n.hom, &subject).map_err(|e| e.to_string())
            }
            "oinv" => {
                need(1)?;
                let f = self.form(&chk.args[0])?;
                o_from_symplectic(&f, &subject)
                    .map(|(_, r)| r)
                    .map_err(|e| e.to_string())
            }
            other => Err(format!("unknown check kind `{other}`")),
        }
    }

    fn tensor(&self, name: &str) -> Result<Tensor2, String> {
        match self.lookup(name) {
            Some(WsObject {
                data: ObjectData::Tensor(t),
                ..
            }) => Ok(t.clone()),
            _ => Err(format!("unknown tensor `{name}`")),
        }
    }

    fn form(&self, name: &str) -> Result<TwoForm, String> {
        match self.lookup(name) {
            Some(WsObject {
                data: ObjectData::Form(f),
                ..
            }) => Ok(f.clone()),
            _ => Err(format!("unknown form `{name}`")),
        }
    }

    fn scalar_map_on(&self, map: &str, on: &str) -> Result<Vec<Vec<ScalarPoly>>, String> {
        match self.lookup(map) {
            Some(WsObject {
                data: ObjectData::ScalarMap { on: o, mat },
                ..
            }) if o == on => Ok(mat.clone()),
            Some(WsObject {
                data: ObjectData::ScalarMap { on: o, .. },
                ..
            }) => Err(format!("map `{map}` is on `{o}`, not `{on}`")),
            _ => Err(format!("unknown scalar map `{map}`")),
        }
    }

    /// An O-operator candidate: a map from a module object to its algebra.
    fn o_operator_pair(&self, pos: Pos, name: &str) -> Result<(Arc<RepStructure>, MapObj), String> {
        let t = self.get_map(pos, name).map_err(|e| e.to_string())?;
        let rep = self
            .get_module(pos, &t.source)
            .map_err(|_| format!("map `{name}`'s source `{}` is not a module object", t.source))?;
        Ok((rep, t))
    }
}

fn basis_index(basis: &[String], name: &str, pos: Pos) -> Result<usize, LoadError> {
    basis
        .iter()
        .position(|b| b == name)
        .ok_or_else(|| LoadError::Resolve {
            pos,
            message: format!("`{name}` is not a basis element of this space"),
        })
}

/// One executed check with its metadata.
pub struct CheckOutcome {
    pub report: Report,
    pub oracle: Option<OracleOutcome>,
    pub millis: u128,
}

pub struct OracleOutcome {
    pub points: u32,
    pub agrees: bool,
}

pub struct RunOptions {
    pub oracle_points: Option<u32>,
    pub seed: u64,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            oracle_points: None,
            seed: 42,
        }
    }
}

impl Workspace {
    /// Runs all checks in file order. The exit flag is true iff every verdict
    /// is a pass.
    pub fn run(&self, opts: &RunOptions) -> (Vec<CheckOutcome>, bool) {
        let mut out = Vec::new();
        let mut all_pass = true;
        for chk in &self.checks {
            let start = std::time::Instant::now();
            let report = self.run_check(chk);
            let millis = start.elapsed().as_millis();
            if report.verdict != Verdict::Pass {
                all_pass = false;
            }
            let oracle = opts.oracle_points.map(|points| {
                let agrees = report.residuals().all(|p| {
                    let symbolic = p.is_identically_zero();
                    let numeric = lck_core::evaluation_oracle(p, points, opts.seed);
                    symbolic == numeric
                });
                OracleOutcome { points, agrees }
            });
            out.push(CheckOutcome {
                report,
                oracle,
                millis,
            });
        }
        (out, all_pass)
    }
}
