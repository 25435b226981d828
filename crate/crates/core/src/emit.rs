//! Renders programs as Java, C++ or pseudo-Java source text. Emission is
//! deterministic; an identifier mangling map (recorded in the output
//! header) carries symbols that are not identifiers in the target
//! language. Shallow method-pattern programs render as interfaces with
//! methods; everything else renders as static generic functions, with
//! typeof clauses becoming `decltype` return types (one call) or
//! `auto` functions (chained calls).

use std::collections::{BTreeMap, HashSet};

use thiserror::Error;

use crate::term::{Node, TermId, TermStore};
use crate::typesys::{
    classify_program, Expr, FunctionDef, Mode, Namespace, PseudoExpr, Ret, TypeProgram,
    TypeofFeature,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Target {
    Java,
    Cpp,
    Pseudo,
}

impl Target {
    pub fn from_name(name: &str) -> Option<Target> {
        match name {
            "java" | "java-syntax" => Some(Target::Java),
            "cpp" | "c++" | "cpp-syntax" => Some(Target::Cpp),
            "pseudo" | "pseudo-syntax" => Some(Target::Pseudo),
            _ => None,
        }
    }
}

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("{target:?} does not support {feature}")]
    Unsupported { target: Target, feature: String },
    #[error("mangling is not injective: `{0}` appears twice")]
    MangleClash(String),
    #[error(transparent)]
    Check(#[from] crate::typesys::CheckError),
}

#[derive(Debug, Clone)]
pub struct EmitOptions {
    pub target: Target,
    pub indent: usize,
    /// Symbol-name substitutions, applied before rendering.
    pub mangle: BTreeMap<String, String>,
    /// Rendering of the unit type.
    pub unit_name: String,
    /// Rank-1 symbols rendered as plain (non-generic) class names; they may
    /// only ever be applied to the unit.
    pub atomic: Vec<String>,
}

impl EmitOptions {
    pub fn new(target: Target) -> Self {
        let mut mangle = BTreeMap::new();
        mangle.insert("∘".to_string(), "O".to_string());
        mangle.insert("♭".to_string(), "B".to_string());
        if matches!(target, Target::Java | Target::Cpp) {
            mangle.insert("$".to_string(), "S_".to_string());
        }
        EmitOptions {
            target,
            indent: 2,
            mangle,
            unit_name: "E".to_string(),
            atomic: Vec::new(),
        }
    }

    pub fn with_unit(mut self, name: &str) -> Self {
        self.unit_name = name.to_string();
        self
    }

    pub fn with_mangle(mut self, from: &str, to: &str) -> Self {
        self.mangle.insert(from.to_string(), to.to_string());
        self
    }

    pub fn with_atomic(mut self, name: &str) -> Self {
        self.atomic.push(name.to_string());
        self
    }

    fn symbol(&self, name: &str) -> String {
        self.mangle.get(name).cloned().unwrap_or_else(|| name.to_string())
    }
}

/// Whitespace- and comment-insensitive form used by golden comparisons:
/// structure and identifiers must match exactly, layout and comments are
/// free.
pub fn normalize_source(text: &str) -> String {
    let mut out = String::new();
    for line in text.lines() {
        let code = match line.find("//") {
            Some(i) => &line[..i],
            None => line,
        };
        for token in code.split_whitespace() {
            if !out.is_empty() {
                out.push(' ');
            }
            out.push_str(token);
        }
    }
    out
}

struct Emitter<'a> {
    program: &'a TypeProgram,
    store: &'a TermStore,
    opts: &'a EmitOptions,
    /// Chained typeof anywhere in the program switches every typeof
    /// definition to the `auto` + return style.
    full_typeof: bool,
    out: String,
}

impl<'a> Emitter<'a> {
    fn pad(&mut self, depth: usize) {
        for _ in 0..depth * self.opts.indent {
            self.out.push(' ');
        }
    }

    fn line(&mut self, depth: usize, text: &str) {
        self.pad(depth);
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn type_name(&self, name: &str) -> String {
        self.opts.symbol(name)
    }

    fn render_type(&self, t: TermId) -> String {
        match self.store.node(t) {
            Node::Leaf => self.opts.unit_name.clone(),
            Node::Var(v) => self.store.var_name(v),
            Node::App(sym, children) => {
                let name = self.store.symbol_name(sym);
                if children.len() == 1
                    && children[0] == self.store.leaf()
                    && self.opts.atomic.iter().any(|a| *a == name)
                {
                    return self.type_name(&name);
                }
                let inner: Vec<String> =
                    children.iter().map(|&c| self.render_type(c)).collect();
                format!("{}<{}>", self.type_name(&name), inner.join(", "))
            }
        }
    }

    fn def_vars(&self, def: &FunctionDef) -> Vec<String> {
        let mut names = Vec::new();
        for &p in &def.params {
            for v in self.store.vars_of(p) {
                let name = self.store.var_name(v);
                if !names.contains(&name) {
                    names.push(name);
                }
            }
        }
        names
    }

    fn header(&mut self) {
        let mut manglings: Vec<String> = Vec::new();
        if self.opts.unit_name != "eps" {
            manglings.push(format!("eps -> {}", self.opts.unit_name));
        }
        for (name, _) in self.store.symbols() {
            let mangled = self.opts.symbol(&name);
            if mangled != name {
                manglings.push(format!("{name} -> {mangled}"));
            }
        }
        let name = self.program.name.as_deref().unwrap_or("program");
        self.line(0, &format!("// {name}; mangling: {}", manglings.join(", ")));
    }

    // -- function style -----------------------------------------------------

    fn render_expr_call(&self, e: &Expr) -> String {
        match e {
            Expr::Unit => match self.opts.target {
                Target::Cpp => format!("{}()", self.opts.unit_name),
                _ => format!("new {}()", self.opts.unit_name),
            },
            Expr::New(t) => match self.opts.target {
                Target::Cpp => format!("{}()", self.render_type(*t)),
                _ => format!("(({}) null)", self.render_type(*t)),
            },
            Expr::Call(name, args) => {
                if args.len() == 1 && matches!(args[0], Expr::Unit) {
                    return format!("{name}()");
                }
                let inner: Vec<String> = args.iter().map(|a| self.render_expr_call(a)).collect();
                format!("{name}({})", inner.join(", "))
            }
        }
    }

    fn render_pseudo(&self, p: &PseudoExpr) -> String {
        match p {
            PseudoExpr::Leaf(t) => format!("{}()", self.render_type(*t)),
            PseudoExpr::Call(name, args) => {
                let inner: Vec<String> = args.iter().map(|a| self.render_pseudo(a)).collect();
                format!("{name}({})", inner.join(", "))
            }
        }
    }

    fn emit_function_style(&mut self) -> Result<(), EmitError> {
        let cpp = self.opts.target == Target::Cpp;
        let has_typeof =
            self.program.defs.iter().any(|d| matches!(d.ret, Ret::Typeof(_)));
        if cpp && has_typeof {
            self.line(0, "#define typeof decltype");
        }
        // Type declarations: the unit first, then the signature.
        if cpp {
            self.line(0, &format!("struct {} {{}};", self.opts.unit_name));
        } else {
            self.line(0, &format!("interface {} {{}}", self.opts.unit_name));
        }
        for (name, rank) in self.store.symbols() {
            let params: Vec<String> = (1..=rank).map(|i| format!("x{i}")).collect();
            if cpp {
                let tparams: Vec<String> =
                    params.iter().map(|p| format!("typename {p}")).collect();
                self.line(
                    0,
                    &format!(
                        "template<{}> struct {} {{}};",
                        tparams.join(", "),
                        self.type_name(&name)
                    ),
                );
            } else {
                self.line(
                    0,
                    &format!("interface {}<{}> {{}}", self.type_name(&name), params.join(", ")),
                );
            }
        }
        // Definitions in declaration order.
        for def in &self.program.defs {
            self.emit_function_def(def)?;
        }
        // Expressions.
        if !self.program.exprs.is_empty() {
            if cpp {
                self.line(0, "int main() {");
                for (i, e) in self.program.exprs.iter().enumerate() {
                    let rendered = self.render_expr_call(e);
                    let unit = self.opts.unit_name.clone();
                    self.line(1, &format!("{unit} w{}={rendered};", i + 1));
                }
                self.line(0, "}");
            } else {
                self.line(0, "static {");
                for e in &self.program.exprs {
                    let rendered = self.render_expr_call(e);
                    self.line(1, &format!("{rendered};"));
                }
                self.line(0, "}");
            }
        }
        Ok(())
    }

    fn emit_function_def(&mut self, def: &FunctionDef) -> Result<(), EmitError> {
        let cpp = self.opts.target == Target::Cpp;
        let vars = self.def_vars(def);
        let generics = if vars.is_empty() {
            String::new()
        } else if cpp {
            let inner: Vec<String> = vars.iter().map(|v| format!("typename {v}")).collect();
            format!("template<{}> ", inner.join(", "))
        } else {
            format!("<{}> ", vars.join(", "))
        };
        // Parameters: the unit-typed bootstrap of primary definitions is a
        // nullary function; elsewhere the unit is an ordinary parameter.
        let nullary = def.params.len() == 1
            && def.params[0] == self.store.leaf()
            && def.namespace == Namespace::Primary;
        let params = if nullary {
            String::new()
        } else {
            let rendered: Vec<String> = def
                .params
                .iter()
                .enumerate()
                .map(|(i, &p)| {
                    let ty = self.render_type(p);
                    if cpp {
                        ty
                    } else if def.params.len() == 1 {
                        format!("{ty} e")
                    } else {
                        format!("{ty} e{}", i + 1)
                    }
                })
                .collect();
            rendered.join(", ")
        };
        let (ret, body) = match &def.ret {
            Ret::Type(t) => {
                if *t == self.store.leaf() && !cpp {
                    ("void".to_string(), "{}".to_string())
                } else {
                    let body = if cpp { "{}" } else { "{ return null; }" };
                    (self.render_type(*t), body.to_string())
                }
            }
            Ret::Typeof(p) => {
                if !cpp {
                    return Err(EmitError::Unsupported {
                        target: self.opts.target,
                        feature: "typeof return clauses".to_string(),
                    });
                }
                if self.full_typeof {
                    ("auto".to_string(), format!("{{ return {}; }}", self.render_pseudo(p)))
                } else {
                    (format!("typeof({})", self.render_pseudo(p)), "{}".to_string())
                }
            }
        };
        let keyword = if cpp { "" } else { "static " };
        self.line(0, &format!("{keyword}{generics}{ret} {}({params}) {body}", def.name));
        Ok(())
    }

    // -- method style -------------------------------------------------------

    /// Which interface a definition's method lives in: the unit, an atomic
    /// class, or the generic class of the pattern root.
    fn method_home(&self, def: &FunctionDef) -> Option<MethodHome> {
        if def.params.len() != 1 || matches!(def.ret, Ret::Typeof(_)) {
            return None;
        }
        let p = def.params[0];
        match self.store.node(p) {
            Node::Leaf => Some(MethodHome::Unit),
            Node::Var(_) => None,
            Node::App(sym, children) => {
                let name = self.store.symbol_name(sym);
                if children.len() == 1
                    && children[0] == self.store.leaf()
                    && self.opts.atomic.iter().any(|a| *a == name)
                {
                    return Some(MethodHome::Atomic(name));
                }
                if children.iter().all(|&c| matches!(self.store.node(c), Node::Var(_))) {
                    let vars: Vec<String> = children
                        .iter()
                        .map(|&c| match self.store.node(c) {
                            Node::Var(v) => self.store.var_name(v),
                            _ => unreachable!(),
                        })
                        .collect();
                    let mut distinct = vars.clone();
                    distinct.dedup();
                    distinct.sort();
                    distinct.dedup();
                    if distinct.len() == vars.len() {
                        return Some(MethodHome::Class(name, vars));
                    }
                }
                None
            }
        }
    }

    fn emit_method_style(&mut self) -> Result<(), EmitError> {
        // Group definitions by home, keeping first-appearance order.
        let mut order: Vec<MethodHome> = vec![MethodHome::Unit];
        let mut homes: Vec<(MethodHome, &FunctionDef)> = Vec::new();
        for def in &self.program.defs {
            let home = self.method_home(def).expect("method style pre-checked");
            if !order.contains(&home) {
                order.push(home.clone());
            }
            homes.push((home, def));
        }
        // Also declare classes that only occur inside types.
        for (name, _) in self.store.symbols() {
            let as_atomic = MethodHome::Atomic(name.clone());
            let has_class = order.iter().any(|h| match h {
                MethodHome::Class(n, _) | MethodHome::Atomic(n) => *n == name,
                MethodHome::Unit => false,
            });
            if !has_class {
                if self.opts.atomic.iter().any(|a| *a == name) {
                    order.push(as_atomic);
                } else {
                    let rank = self.store.rank(self.store.symbol(&name).unwrap());
                    let vars: Vec<String> = (1..=rank).map(|i| format!("x{i}")).collect();
                    order.push(MethodHome::Class(name, vars));
                }
            }
        }

        for home in &order {
            let decl = match home {
                MethodHome::Unit => format!("interface {}", self.opts.unit_name),
                MethodHome::Atomic(name) => format!("interface {}", self.type_name(name)),
                MethodHome::Class(name, vars) => {
                    format!("interface {}<{}>", self.type_name(name), vars.join(", "))
                }
            };
            self.line(0, &format!("{decl} {{"));
            for (h, def) in &homes {
                if h != home {
                    continue;
                }
                let ret = match &def.ret {
                    Ret::Type(t) if *t == self.store.leaf() => "void".to_string(),
                    Ret::Type(t) => self.render_type(*t),
                    Ret::Typeof(_) => unreachable!("method style has no typeof"),
                };
                self.line(1, &format!("{ret} {}();", def.name));
            }
            self.line(0, "}");
        }

        for e in &self.program.exprs {
            let rendered = self.render_chain(e);
            self.line(0, &format!("{rendered};"));
        }
        Ok(())
    }

    fn render_chain(&self, e: &Expr) -> String {
        match e {
            Expr::Unit => format!("new {}()", self.opts.unit_name),
            Expr::New(t) => format!("new {}()", self.render_type(*t)),
            Expr::Call(name, args) if args.len() == 1 => {
                format!("{}.{name}()", self.render_chain(&args[0]))
            }
            Expr::Call(name, args) => {
                let inner: Vec<String> = args.iter().map(|a| self.render_chain(a)).collect();
                format!("{name}({})", inner.join(", "))
            }
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
enum MethodHome {
    Unit,
    Atomic(String),
    Class(String, Vec<String>),
}

/// Emits a program as source text for the chosen target.
pub fn emit(program: &TypeProgram, opts: &EmitOptions) -> Result<String, EmitError> {
    let point = classify_program(program)?;
    match opts.target {
        Target::Java => {
            if point.typeof_ != TypeofFeature::NoTypeof {
                return Err(EmitError::Unsupported {
                    target: opts.target,
                    feature: "typeof return clauses".to_string(),
                });
            }
            if point.overloading != Mode::OneType {
                return Err(EmitError::Unsupported {
                    target: opts.target,
                    feature: "overloading beyond one-type resolution".to_string(),
                });
            }
        }
        Target::Cpp => {
            if point.overloading != Mode::OneType {
                return Err(EmitError::Unsupported {
                    target: opts.target,
                    feature: "overloading beyond one-type resolution".to_string(),
                });
            }
        }
        Target::Pseudo => {}
    }

    // Injectivity of the recorded mangling.
    let mut seen = HashSet::new();
    seen.insert(opts.unit_name.clone());
    for (name, _) in program.store.symbols() {
        if !seen.insert(opts.symbol(&name)) {
            return Err(EmitError::MangleClash(opts.symbol(&name)));
        }
    }

    let mut emitter = Emitter {
        program,
        store: &program.store,
        opts,
        full_typeof: point.typeof_ == TypeofFeature::FullTypeof,
        out: String::new(),
    };
    emitter.header();
    let methodable = opts.target != Target::Cpp
        && program.defs.iter().all(|d| emitter.method_home(d).is_some());
    if methodable {
        emitter.emit_method_style()?;
    } else {
        emitter.emit_function_style()?;
    }
    Ok(emitter.out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    #[test]
    fn emission_is_deterministic() {
        let program = fixtures::anbncn_deep();
        let opts = EmitOptions::new(Target::Java).with_unit("Zero");
        let one = emit(&program, &opts).unwrap();
        let two = emit(&program, &opts).unwrap();
        assert_eq!(one, two);
    }

    #[test]
    fn java_rejects_typeof_and_ada_overloading() {
        let opts = EmitOptions::new(Target::Java);
        let err = emit(&fixtures::ww_full_typeof(), &opts).unwrap_err();
        assert!(matches!(err, EmitError::Unsupported { .. }));
        let err = emit(&fixtures::palindrome_program(), &opts).unwrap_err();
        match err {
            EmitError::Unsupported { feature, .. } => {
                assert!(feature.contains("overloading"))
            }
            other => panic!("expected unsupported, got {other:?}"),
        }
    }

    #[test]
    fn pseudo_accepts_everything() {
        let opts = EmitOptions::new(Target::Pseudo).with_atomic("$");
        let out = emit(&fixtures::palindrome_program(), &opts).unwrap();
        assert!(out.contains("interface $ {"));
        assert!(out.contains("void $();"));
    }

    #[test]
    fn dyck_renders_as_interfaces() {
        let opts = EmitOptions::new(Target::Java);
        let out = emit(&fixtures::dyck_stack(), &opts).unwrap();
        assert!(out.contains("interface Empty<x1> {"));
        assert!(out.contains("Stack<Empty<x1>> push();"));
        assert!(out.contains("x1 pop();"));
    }

    #[test]
    fn c1_renders_as_static_functions() {
        let opts = EmitOptions::new(Target::Java).with_unit("Zero");
        let out = emit(&fixtures::anbncn_deep(), &opts).unwrap();
        assert!(out.contains("static g1<Zero, Zero> begin() { return null; }"));
        assert!(out.contains("static <x1, x2> g2<x1, x2> b(g1<Succ<x1>, x2> e) { return null; }"));
        assert!(out.contains("static void end(g3<Zero> e) {}"));
    }

    #[test]
    fn normalization_ignores_layout_and_comments() {
        let a = "int  main() { // says hi\n  f( x );\n}";
        let b = "int main() {\nf( x ); // different note\n}";
        assert_eq!(normalize_source(a), normalize_source(b));
    }
}
