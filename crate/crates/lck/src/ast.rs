//! Parsed syntax of a workspace file, prior to resolution.

use crate::lex::Pos;

#[derive(Debug, Clone)]
pub enum Expr {
    Int(i64),
    Ident(String, Pos),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, Pos),
    Pow(Box<Expr>, u32, Pos),
    Otimes(Box<Expr>, Box<Expr>, Pos),
}

#[derive(Debug, Clone)]
pub struct AlgebraDecl {
    pub name: String,
    pub rank: usize,
    pub basis: Vec<String>,
    /// `[i, j] = expr;` entries by basis name.
    pub entries: Vec<(String, String, Expr, Pos)>,
}

#[derive(Debug, Clone)]
pub struct ModuleDecl {
    pub name: String,
    pub over: String,
    pub rank: usize,
    pub basis: Vec<String>,
    /// `gen.vec = expr;` entries.
    pub entries: Vec<(String, String, Expr, Pos)>,
}

#[derive(Debug, Clone)]
pub struct MapDecl {
    pub name: String,
    pub source: String,
    pub target: String,
    /// `gen -> expr;` entries.
    pub entries: Vec<(String, Expr, Pos)>,
}

#[derive(Debug, Clone)]
pub struct TensorDecl {
    pub name: String,
    pub algebra: String,
    pub expr: Expr,
    pub pos: Pos,
}

#[derive(Debug, Clone)]
pub struct FormDecl {
    pub name: String,
    pub on: String,
    pub entries: Vec<(String, String, Expr, Pos)>,
}

#[derive(Debug, Clone)]
pub struct NovikovDecl {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub products: Vec<(String, String, Expr, Pos)>,
}

#[derive(Debug, Clone)]
pub struct GdDecl {
    pub name: String,
    pub dim: usize,
    pub basis: Vec<String>,
    pub products: Vec<(String, String, Expr, Pos)>,
    pub brackets: Vec<(String, String, Expr, Pos)>,
}

/// `let name = <constructor> args;`
#[derive(Debug, Clone)]
pub enum Construction {
    Deform { algebra: String, map: String },
    Semidirect { algebra: String, module: String },
    Adjoint { algebra: String },
    Coadjoint { module: String },
    Trivial { algebra: String, rank: usize },
    Quadratic { gd: String },
    Dual { map: String },
    OInv { form: String, module: String },
    Compose { first: String, second: String },
    Power { map: String, k: u32 },
    RSharp { tensor: String },
    RDeform { tensor: String, map: String, k: u32 },
    OmegaN { form: String, map: String, k: u32 },
    RFromForm { form: String },
    Lift { map: String, algebra: String },
}

#[derive(Debug, Clone)]
pub struct CheckStmt {
    pub kind: String,
    pub args: Vec<String>,
    pub kmax: Option<u32>,
    pub pos: Pos,
}

#[derive(Debug, Clone)]
pub enum Item {
    Scalars(Vec<String>),
    Algebra(AlgebraDecl),
    Module(ModuleDecl),
    Map(MapDecl),
    Tensor(TensorDecl),
    Form(FormDecl),
    Novikov(NovikovDecl),
    Gd(GdDecl),
    Let {
        name: String,
        construction: Construction,
        pos: Pos,
    },
    Check(CheckStmt),
}

#[derive(Debug, Clone, Default)]
pub struct File {
    pub items: Vec<Item>,
}
