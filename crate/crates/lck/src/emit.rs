//! Canonical DSL rendering: any workspace object (declared or constructed)
//! emits as a standalone parseable file, so `parse(emit(x))` reconstructs a
//! structurally equal object.

use crate::workspace::{MapObj, ObjectData, Workspace, WsObject};
use lck_core::freemod::CdModule;
use lck_core::poly::{ScalarPoly, SymbolKind};
use std::collections::BTreeSet;
use std::sync::Arc;

fn elem_string(module: &CdModule, coeffs: &[ScalarPoly]) -> String {
    let parts: Vec<String> = coeffs
        .iter()
        .enumerate()
        .filter(|(_, p)| !p.is_zero())
        .map(|(i, p)| format!("({p})*{}", module.basis[i]))
        .collect();
    if parts.is_empty() {
        "0".to_string()
    } else {
        parts.join(" + ")
    }
}

fn params_of_tables<'a>(polys: impl Iterator<Item = &'a ScalarPoly>) -> BTreeSet<usize> {
    let mut out = BTreeSet::new();
    for p in polys {
        for idx in p.support() {
            if p.ctx().kind(idx) == SymbolKind::Param {
                out.insert(idx);
            }
        }
    }
    out
}

struct Emitter<'a> {
    ws: &'a Workspace,
    emitted: Vec<String>,
    seen: BTreeSet<String>,
    params: BTreeSet<usize>,
}

impl<'a> Emitter<'a> {
    /// Object name that carries the given free module, preferring modules.
    fn space_object(&self, module: &Arc<CdModule>) -> Option<&WsObject> {
        self.ws
            .objects
            .iter()
            .find(|o| match &o.data {
                ObjectData::Module(m) => m.module() == module,
                _ => false,
            })
            .or_else(|| {
                self.ws.objects.iter().find(|o| match &o.data {
                    ObjectData::Algebra(a) => a.module() == module,
                    _ => false,
                })
            })
    }

    /// The workspace algebra that IS the given one (pointer identity first,
    /// then table equality), so objects over a deformed algebra do not get
    /// attributed to the original that shares its basis names.
    fn algebra_object_for(&self, algebra: &Arc<lck_core::lca::LcaStructure>) -> Option<&WsObject> {
        self.ws
            .objects
            .iter()
            .find(|o| match &o.data {
                ObjectData::Algebra(a) => Arc::ptr_eq(a, algebra),
                _ => false,
            })
            .or_else(|| {
                self.ws.objects.iter().find(|o| match &o.data {
                    ObjectData::Algebra(a) => {
                        a.module() == algebra.module() && a.table() == algebra.table()
                    }
                    _ => false,
                })
            })
    }

    fn emit(&mut self, obj: &WsObject) -> Result<(), String> {
        if self.seen.contains(&obj.name) {
            return Ok(());
        }
        self.seen.insert(obj.name.clone());
        let text = match &obj.data {
            ObjectData::Algebra(a) => {
                self.params
                    .extend(params_of_tables(a.table().iter().flatten().flatten()));
                let n = a.rank();
                let mut lines = vec![format!(
                    "algebra {} rank {} basis {} {{",
                    obj.name,
                    n,
                    a.module().basis.join(" ")
                )];
                for i in 0..n {
                    for j in i..n {
                        let entry = a.entry(i, j);
                        if !entry.is_zero() {
                            lines.push(format!(
                                "  [{},{}] = {};",
                                a.module().basis[i],
                                a.module().basis[j],
                                elem_string(a.module(), &entry.coeffs)
                            ));
                        }
                    }
                }
                lines.push("}".into());
                lines.join("\n")
            }
            ObjectData::Module(rep) => {
                // the algebra must be emitted first
                let alg_obj = self
                    .algebra_object_for(rep.algebra())
                    .ok_or_else(|| {
                        format!("module `{}`'s algebra is not a named object", obj.name)
                    })?;
                let alg_name = alg_obj.name.clone();
                let alg_obj = WsObject {
                    name: alg_obj.name.clone(),
                    data: alg_obj.data.clone(),
                };
                self.emit(&alg_obj)?;
                self.params
                    .extend(params_of_tables(rep.table().iter().flatten().flatten()));
                let mut lines = vec![format!(
                    "module {} over {} rank {} basis {} {{",
                    obj.name,
                    alg_name,
                    rep.module().rank(),
                    rep.module().basis.join(" ")
                )];
                for i in 0..rep.algebra().rank() {
                    for j in 0..rep.module().rank() {
                        let coeffs = &rep.table()[i][j];
                        if coeffs.iter().any(|p| !p.is_zero()) {
                            lines.push(format!(
                                "  {}.{} = {};",
                                rep.algebra().module().basis[i],
                                rep.module().basis[j],
                                elem_string(rep.module(), coeffs)
                            ));
                        }
                    }
                }
                lines.push("}".into());
                lines.join("\n")
            }
            ObjectData::Map(m) => self.emit_map(&obj.name, m)?,
            ObjectData::ScalarMap { on, mat } => {
                let carrier = self
                    .ws
                    .lookup(on)
                    .ok_or_else(|| format!("scalar map carrier `{on}` missing"))?;
                let basis = match &carrier.data {
                    ObjectData::Novikov(nv) => nv.basis.clone(),
                    ObjectData::Gd(gd) => gd.nov.basis.clone(),
                    _ => return Err(format!("`{on}` is not a novikov/gd object")),
                };
                let carrier = WsObject {
                    name: carrier.name.clone(),
                    data: carrier.data.clone(),
                };
                self.emit(&carrier)?;
                self.params.extend(params_of_tables(mat.iter().flatten()));
                let space = CdModule::new(basis.clone());
                let mut lines = vec![format!("map {} : {} -> {} {{", obj.name, on, on)];
                for (i, row) in mat.iter().enumerate() {
                    if row.iter().any(|p| !p.is_zero()) {
                        lines.push(format!(
                            "  {} -> {};",
                            basis[i],
                            elem_string(&space, row)
                        ));
                    }
                }
                lines.push("}".into());
                lines.join("\n")
            }
            ObjectData::Tensor(t) => {
                let alg_obj = self
                    .algebra_object_for(&t.algebra)
                    .ok_or_else(|| format!("tensor `{}`'s algebra is not named", obj.name))?;
                let alg_name = alg_obj.name.clone();
                let alg_obj = WsObject {
                    name: alg_obj.name.clone(),
                    data: alg_obj.data.clone(),
                };
                self.emit(&alg_obj)?;
                self.params
                    .extend(params_of_tables(t.coeffs.iter().flatten()));
                let basis = &t.algebra.module().basis;
                let mut parts = Vec::new();
                for (i, row) in t.coeffs.iter().enumerate() {
                    for (j, p) in row.iter().enumerate() {
                        if !p.is_zero() {
                            parts.push(format!("({p})*({} (x) {})", basis[i], basis[j]));
                        }
                    }
                }
                let body = if parts.is_empty() {
                    "0".to_string()
                } else {
                    parts.join(" + ")
                };
                format!(
                    "tensor {} in {} (x) {} = {};",
                    obj.name, alg_name, alg_name, body
                )
            }
            ObjectData::Form(f) => {
                let alg_obj = self
                    .algebra_object_for(f.algebra())
                    .ok_or_else(|| format!("form `{}`'s algebra is not named", obj.name))?;
                let alg_name = alg_obj.name.clone();
                let alg_obj = WsObject {
                    name: alg_obj.name.clone(),
                    data: alg_obj.data.clone(),
                };
                self.emit(&alg_obj)?;
                self.params
                    .extend(params_of_tables(f.table().iter().flatten()));
                let basis = &f.algebra().module().basis;
                let n = basis.len();
                let mut lines = vec![format!("form {} on {} {{", obj.name, alg_name)];
                for i in 0..n {
                    for j in (i + 1)..n {
                        let p = &f.table()[i][j];
                        if !p.is_zero() {
                            lines.push(format!("  ({},{}) = {};", basis[i], basis[j], p));
                        }
                    }
                }
                lines.push("}".into());
                lines.join("\n")
            }
            ObjectData::Novikov(nv) => {
                self.params
                    .extend(params_of_tables(nv.mul.iter().flatten().flatten()));
                let space = CdModule::new(nv.basis.clone());
                let mut lines = vec![format!(
                    "novikov {} dim {} basis {} {{",
                    obj.name,
                    nv.dim(),
                    nv.basis.join(" ")
                )];
                for (i, plane) in nv.mul.iter().enumerate() {
                    for (j, row) in plane.iter().enumerate() {
                        if row.iter().any(|p| !p.is_zero()) {
                            lines.push(format!(
                                "  {}*{} = {};",
                                nv.basis[i],
                                nv.basis[j],
                                elem_string(&space, row)
                            ));
                        }
                    }
                }
                lines.push("}".into());
                lines.join("\n")
            }
            ObjectData::Gd(gd) => {
                self.params
                    .extend(params_of_tables(gd.nov.mul.iter().flatten().flatten()));
                self.params
                    .extend(params_of_tables(gd.lie.iter().flatten().flatten()));
                let space = CdModule::new(gd.nov.basis.clone());
                let mut lines = vec![format!(
                    "gd {} dim {} basis {} {{",
                    obj.name,
                    gd.dim(),
                    gd.nov.basis.join(" ")
                )];
                for (i, plane) in gd.nov.mul.iter().enumerate() {
                    for (j, row) in plane.iter().enumerate() {
                        if row.iter().any(|p| !p.is_zero()) {
                            lines.push(format!(
                                "  {}*{} = {};",
                                gd.nov.basis[i],
                                gd.nov.basis[j],
                                elem_string(&space, row)
                            ));
                        }
                    }
                }
                let d = gd.dim();
                for i in 0..d {
                    for j in (i + 1)..d {
                        let row = &gd.lie[i][j];
                        if row.iter().any(|p| !p.is_zero()) {
                            lines.push(format!(
                                "  [{},{}] = {};",
                                gd.nov.basis[i],
                                gd.nov.basis[j],
                                elem_string(&space, row)
                            ));
                        }
                    }
                }
                lines.push("}".into());
                lines.join("\n")
            }
        };
        self.emitted.push(text);
        Ok(())
    }

    fn emit_map(&mut self, name: &str, m: &MapObj) -> Result<String, String> {
        // resolve source and target to declared objects (the stored names may
        // be synthetic for dual maps)
        let source_obj = match self.ws.lookup(&m.source) {
            Some(o) => Some(o),
            None => self.space_object(&m.hom.source),
        }
        .ok_or_else(|| {
            format!("map `{name}`: no declared object carries its source module; construct one (e.g. a coadjoint module) first")
        })?;
        let target_obj = match self.ws.lookup(&m.target) {
            Some(o) => Some(o),
            None => self.space_object(&m.hom.target),
        }
        .ok_or_else(|| format!("map `{name}`: no declared object carries its target module"))?;
        let (sname, tname) = (source_obj.name.clone(), target_obj.name.clone());
        let sobj = WsObject {
            name: source_obj.name.clone(),
            data: source_obj.data.clone(),
        };
        let tobj = WsObject {
            name: target_obj.name.clone(),
            data: target_obj.data.clone(),
        };
        self.emit(&sobj)?;
        self.emit(&tobj)?;
        self.params
            .extend(params_of_tables(m.hom.mat.iter().flatten()));
        let mut lines = vec![format!("map {} : {} -> {} {{", name, sname, tname)];
        for (i, row) in m.hom.mat.iter().enumerate() {
            if row.iter().any(|p| !p.is_zero()) {
                lines.push(format!(
                    "  {} -> {};",
                    m.hom.source.basis[i],
                    elem_string(&m.hom.target, row)
                ));
            }
        }
        lines.push("}".into());
        Ok(lines.join("\n"))
    }
}

/// Emits the named object (with its dependencies) as canonical DSL text.
pub fn emit_object(ws: &Workspace, name: &str) -> Result<String, String> {
    let obj = ws
        .lookup(name)
        .ok_or_else(|| format!("unknown object `{name}`"))?;
    let obj = WsObject {
        name: obj.name.clone(),
        data: obj.data.clone(),
    };
    let mut emitter = Emitter {
        ws,
        emitted: Vec::new(),
        seen: BTreeSet::new(),
        params: BTreeSet::new(),
    };
    emitter.emit(&obj)?;
    let mut out = String::new();
    if !emitter.params.is_empty() {
        let names: Vec<&str> = emitter.params.iter().map(|&i| ws.ctx.name(i)).collect();
        out.push_str(&format!("scalars {};\n", names.join(" ")));
    }
    for block in &emitter.emitted {
        out.push_str(block);
        out.push('\n');
    }
    Ok(out)
}
