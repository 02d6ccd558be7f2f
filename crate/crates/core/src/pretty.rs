//! Two renderings of a parsed program: canonical LOLCODE source, and an
//! indented tree dump for `--dump-ast`.

use std::fmt::Write;

use crate::ast::*;
use crate::value::{Tag, Value};

fn type_word(t: Tag) -> &'static str {
    t.name()
}

fn plural_type_word(t: Tag) -> String {
    format!("{}S", t.name())
}

fn yarn_literal(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            ':' => out.push_str("::"),
            '"' => out.push_str(":\""),
            '\n' => out.push_str(":)"),
            '\t' => out.push_str(":>"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn numbar_literal(x: f64) -> String {
    let s = format!("{x}");
    if s.contains('.') {
        s
    } else {
        format!("{s}.0")
    }
}

fn literal(v: &Value) -> String {
    match v {
        Value::Noob => "NOOB".into(),
        Value::Troof(true) => "WIN".into(),
        Value::Troof(false) => "FAIL".into(),
        Value::Numbr(n) => n.to_string(),
        Value::Numbar(x) => numbar_literal(*x),
        Value::Yarn(s) => yarn_literal(s),
        Value::Array(_) => "<array>".into(),
    }
}

pub fn expression_source(e: &Expression) -> String {
    match e {
        Expression::Literal(v) => literal(v),
        Expression::Ref(r) => reference_source(r),
        Expression::BinOp { op, lhs, rhs } => format!(
            "{} {} AN {}",
            op.name(),
            expression_source(lhs),
            expression_source(rhs)
        ),
        Expression::Math { op, arg } => format!("{} {}", op.name(), expression_source(arg)),
        Expression::Maek { arg, to } => {
            format!("MAEK {} A {}", expression_source(arg), type_word(*to))
        }
        Expression::Me => "ME".into(),
        Expression::MahFrenz => "MAH FRENZ".into(),
        Expression::Whatevr => "WHATEVR".into(),
        Expression::Whatevar => "WHATEVAR".into(),
    }
}

pub fn reference_source(r: &Reference) -> String {
    let mut s = String::new();
    match r.locality {
        Locality::Unqualified => {}
        Locality::Mah => s.push_str("MAH "),
        Locality::Ur => s.push_str("UR "),
    }
    match &r.name {
        RefName::Static(n) => s.push_str(n),
        RefName::Dynamic(e) => {
            s.push_str("SRS ");
            s.push_str(&expression_source(e));
        }
    }
    if let Some(i) = &r.index {
        s.push_str("'Z ");
        s.push_str(&expression_source(i));
    }
    s
}

struct SourceWriter {
    out: String,
}

impl SourceWriter {
    fn line(&mut self, depth: usize, text: &str) {
        for _ in 0..depth {
            self.out.push_str("  ");
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn block(&mut self, depth: usize, b: &Block) {
        for s in b {
            self.statement(depth, s);
        }
    }

    fn if_tail(&mut self, depth: usize, then: &Block, otherwise: &Option<Block>) {
        self.line(depth, "YA RLY");
        self.block(depth + 1, then);
        if let Some(b) = otherwise {
            self.line(depth, "NO WAI");
            self.block(depth + 1, b);
        }
        self.line(depth, "OIC");
    }

    /// Single-line form of a simple statement, if it has one.
    fn inline(s: &Statement) -> Option<String> {
        Some(match &s.kind {
            StmtKind::Declare(d) => {
                let mut t = format!(
                    "{} {}",
                    if d.scope == Scope::Shared {
                        "WE HAS A"
                    } else {
                        "I HAS A"
                    },
                    d.name
                );
                let mut clauses = Vec::new();
                if let Some(ty) = d.declared_type {
                    clauses.push(match (ty, d.strict) {
                        (TypeSpec::Array(e), _) => {
                            format!("ITZ SRSLY LOTZ A {}", plural_type_word(e))
                        }
                        (TypeSpec::Scalar(t), true) => format!("ITZ SRSLY A {}", type_word(t)),
                        (TypeSpec::Scalar(t), false) => format!("ITZ A {}", type_word(t)),
                    });
                }
                if let Some(size) = &d.size_expr {
                    clauses.push(format!("THAR IZ {}", expression_source(size)));
                }
                if let Some(init) = &d.init_expr {
                    clauses.push(format!("ITZ {}", expression_source(init)));
                }
                if d.shared_lock {
                    clauses.push("IM SHARIN IT".into());
                }
                if !clauses.is_empty() {
                    t.push(' ');
                    t.push_str(&clauses.join(" AN "));
                }
                t
            }
            StmtKind::Assign { target, expr } => {
                format!("{} R {}", reference_source(target), expression_source(expr))
            }
            StmtKind::Visible(args) => format!(
                "VISIBLE {}",
                args.iter()
                    .map(expression_source)
                    .collect::<Vec<_>>()
                    .join(" ")
            ),
            StmtKind::Gimmeh(r) => format!("GIMMEH {}", reference_source(r)),
            StmtKind::CanHas(lib) => format!("CAN HAS {lib}?"),
            StmtKind::Break => "GTFO".into(),
            StmtKind::Cast { target, to } => {
                format!("{} IS NOW A {}", reference_source(target), type_word(*to))
            }
            StmtKind::Barrier => "HUGZ".into(),
            StmtKind::LockAcquire(r) => format!("IM SRSLY MESIN WIF {}", reference_source(r)),
            StmtKind::LockRelease(r) => format!("DUN MESIN WIF {}", reference_source(r)),
            StmtKind::Predicated { pe, inner } => {
                let inner = Self::inline(inner)?;
                format!("TXT MAH BFF {}, {}", expression_source(pe), inner)
            }
            _ => return None,
        })
    }

    fn statement(&mut self, depth: usize, s: &Statement) {
        if let Some(text) = Self::inline(s) {
            self.line(depth, &text);
            return;
        }
        match &s.kind {
            StmtKind::If {
                cond,
                then,
                otherwise,
            } => {
                self.line(depth, &format!("{}, O RLY?", expression_source(cond)));
                self.if_tail(depth, then, otherwise);
            }
            StmtKind::TryLockIf {
                target,
                blocking,
                then,
                otherwise,
            } => {
                let kw = if *blocking {
                    "IM SRSLY MESIN WIF"
                } else {
                    "IM MESIN WIF"
                };
                self.line(depth, &format!("{kw} {}, O RLY?", reference_source(target)));
                self.if_tail(depth, then, otherwise);
            }
            StmtKind::Switch {
                subject,
                arms,
                default,
            } => {
                self.line(depth, &format!("{}, WTF?", expression_source(subject)));
                for (lit, body) in arms {
                    self.line(depth, &format!("OMG {}", literal(lit)));
                    self.block(depth + 1, body);
                }
                if let Some(b) = default {
                    self.line(depth, "OMGWTF");
                    self.block(depth + 1, b);
                }
                self.line(depth, "OIC");
            }
            StmtKind::Loop(l) => {
                let mut head = format!("IM IN YR {}", l.label);
                if let Some((dir, var)) = &l.update {
                    let kw = match dir {
                        LoopDirection::Uppin => "UPPIN YR",
                        LoopDirection::Nerfin => "NERFIN YR",
                    };
                    let _ = write!(head, " {kw} {var}");
                }
                match &l.condition {
                    Some(LoopCondition::Til(e)) => {
                        let _ = write!(head, " TIL {}", expression_source(e));
                    }
                    Some(LoopCondition::Wile(e)) => {
                        let _ = write!(head, " WILE {}", expression_source(e));
                    }
                    None => {}
                }
                self.line(depth, &head);
                self.block(depth + 1, &l.body);
                self.line(depth, &format!("IM OUTTA YR {}", l.label));
            }
            StmtKind::PredicatedBlock { pe, body } => {
                self.line(
                    depth,
                    &format!("TXT MAH BFF {} AN STUFF", expression_source(pe)),
                );
                self.block(depth + 1, body);
                self.line(depth, "TTYL");
            }
            StmtKind::Predicated { pe, inner } => {
                // compound inner statement: open it on the same line
                let mut nested = SourceWriter { out: String::new() };
                nested.statement(0, inner);
                let mut lines = nested.out.lines();
                let first = lines.next().unwrap_or_default();
                self.line(
                    depth,
                    &format!("TXT MAH BFF {}, {}", expression_source(pe), first),
                );
                for l in lines {
                    self.line(depth, l);
                }
            }
            _ => unreachable!("inline statement"),
        }
    }
}

/// Render a program back to LOLCODE source that parses to the same tree.
pub fn to_source(p: &Program) -> String {
    let mut w = SourceWriter { out: String::new() };
    match p.version {
        Some(v) => w.line(0, &format!("HAI {}", numbar_literal(v))),
        None => w.line(0, "HAI"),
    }
    w.block(1, &p.statements);
    w.line(0, "KTHXBYE");
    w.out
}

struct TreeWriter {
    out: String,
}

impl TreeWriter {
    fn line(&mut self, depth: usize, text: &str) {
        for _ in 0..depth {
            self.out.push_str("  ");
        }
        self.out.push_str(text);
        self.out.push('\n');
    }

    fn value(v: &Value) -> String {
        match v {
            Value::Yarn(s) => format!("YARN {s:?}"),
            Value::Numbar(x) => format!("NUMBAR {x:?}"),
            Value::Numbr(n) => format!("NUMBR {n}"),
            Value::Troof(b) => format!("TROOF {}", if *b { "WIN" } else { "FAIL" }),
            Value::Noob => "NOOB".into(),
            Value::Array(_) => "ARRAY".into(),
        }
    }

    fn reference(&mut self, depth: usize, r: &Reference) {
        let loc = match r.locality {
            Locality::Unqualified => "",
            Locality::Mah => " mah",
            Locality::Ur => " ur",
        };
        match &r.name {
            RefName::Static(n) => self.line(depth, &format!("Ref {n}{loc}")),
            RefName::Dynamic(e) => {
                self.line(depth, &format!("Ref srs{loc}"));
                self.expr(depth + 1, e);
            }
        }
        if let Some(i) = &r.index {
            self.line(depth + 1, "index:");
            self.expr(depth + 2, i);
        }
    }

    fn expr(&mut self, depth: usize, e: &Expression) {
        match e {
            Expression::Literal(v) => self.line(depth, &format!("Literal {}", Self::value(v))),
            Expression::Ref(r) => self.reference(depth, r),
            Expression::BinOp { op, lhs, rhs } => {
                self.line(depth, &format!("BinOp {}", op.name()));
                self.expr(depth + 1, lhs);
                self.expr(depth + 1, rhs);
            }
            Expression::Math { op, arg } => {
                self.line(depth, &format!("Math {}", op.name()));
                self.expr(depth + 1, arg);
            }
            Expression::Maek { arg, to } => {
                self.line(depth, &format!("Maek {to}"));
                self.expr(depth + 1, arg);
            }
            Expression::Me => self.line(depth, "Me"),
            Expression::MahFrenz => self.line(depth, "MahFrenz"),
            Expression::Whatevr => self.line(depth, "Whatevr"),
            Expression::Whatevar => self.line(depth, "Whatevar"),
        }
    }

    fn labelled_block(&mut self, depth: usize, label: &str, b: &Block) {
        self.line(depth, label);
        for s in b {
            self.stmt(depth + 1, s);
        }
    }

    fn stmt(&mut self, depth: usize, s: &Statement) {
        match &s.kind {
            StmtKind::Declare(d) => {
                let mut head = format!(
                    "Declare {} {}",
                    if d.scope == Scope::Shared {
                        "shared"
                    } else {
                        "local"
                    },
                    d.name
                );
                match d.declared_type {
                    Some(TypeSpec::Scalar(t)) => {
                        let _ = write!(head, " type={t}");
                    }
                    Some(TypeSpec::Array(t)) => {
                        let _ = write!(head, " type={t}[]");
                    }
                    None => head.push_str(" type=dynamic"),
                }
                if d.strict {
                    head.push_str(" strict");
                }
                if d.shared_lock {
                    head.push_str(" lock");
                }
                self.line(depth, &head);
                if let Some(e) = &d.size_expr {
                    self.line(depth + 1, "size:");
                    self.expr(depth + 2, e);
                }
                if let Some(e) = &d.init_expr {
                    self.line(depth + 1, "init:");
                    self.expr(depth + 2, e);
                }
            }
            StmtKind::Assign { target, expr } => {
                self.line(depth, "Assign");
                self.reference(depth + 1, target);
                self.expr(depth + 1, expr);
            }
            StmtKind::Visible(args) => {
                self.line(depth, "Visible");
                for a in args {
                    self.expr(depth + 1, a);
                }
            }
            StmtKind::Gimmeh(r) => {
                self.line(depth, "Gimmeh");
                self.reference(depth + 1, r);
            }
            StmtKind::CanHas(lib) => self.line(depth, &format!("CanHas {lib}")),
            StmtKind::If {
                cond,
                then,
                otherwise,
            } => {
                self.line(depth, "If");
                self.expr(depth + 1, cond);
                self.labelled_block(depth + 1, "then:", then);
                if let Some(b) = otherwise {
                    self.labelled_block(depth + 1, "else:", b);
                }
            }
            StmtKind::Switch {
                subject,
                arms,
                default,
            } => {
                self.line(depth, "Switch");
                self.expr(depth + 1, subject);
                for (lit, body) in arms {
                    self.labelled_block(depth + 1, &format!("case {}:", Self::value(lit)), body);
                }
                if let Some(b) = default {
                    self.labelled_block(depth + 1, "default:", b);
                }
            }
            StmtKind::Loop(l) => {
                let mut head = format!("Loop {}", l.label);
                if let Some((dir, var)) = &l.update {
                    let d = match dir {
                        LoopDirection::Uppin => "uppin",
                        LoopDirection::Nerfin => "nerfin",
                    };
                    let _ = write!(head, " {d} {var}");
                }
                self.line(depth, &head);
                match &l.condition {
                    Some(LoopCondition::Til(e)) => {
                        self.line(depth + 1, "til:");
                        self.expr(depth + 2, e);
                    }
                    Some(LoopCondition::Wile(e)) => {
                        self.line(depth + 1, "wile:");
                        self.expr(depth + 2, e);
                    }
                    None => {}
                }
                self.labelled_block(depth + 1, "body:", &l.body);
            }
            StmtKind::Break => self.line(depth, "Break"),
            StmtKind::Cast { target, to } => {
                self.line(depth, &format!("Cast {to}"));
                self.reference(depth + 1, target);
            }
            StmtKind::Barrier => self.line(depth, "Barrier"),
            StmtKind::LockAcquire(r) => {
                self.line(depth, "LockAcquire");
                self.reference(depth + 1, r);
            }
            StmtKind::LockRelease(r) => {
                self.line(depth, "LockRelease");
                self.reference(depth + 1, r);
            }
            StmtKind::TryLockIf {
                target,
                blocking,
                then,
                otherwise,
            } => {
                self.line(
                    depth,
                    if *blocking {
                        "TryLockIf blocking"
                    } else {
                        "TryLockIf"
                    },
                );
                self.reference(depth + 1, target);
                self.labelled_block(depth + 1, "then:", then);
                if let Some(b) = otherwise {
                    self.labelled_block(depth + 1, "else:", b);
                }
            }
            StmtKind::Predicated { pe, inner } => {
                self.line(depth, "Predicated");
                self.expr(depth + 1, pe);
                self.stmt(depth + 1, inner);
            }
            StmtKind::PredicatedBlock { pe, body } => {
                self.line(depth, "PredicatedBlock");
                self.expr(depth + 1, pe);
                self.labelled_block(depth + 1, "body:", body);
            }
        }
    }
}

/// Indented tree, two spaces per level. Spans are omitted so the dump only
/// reflects structure.
pub fn dump_tree(p: &Program) -> String {
    let mut w = TreeWriter { out: String::new() };
    match p.version {
        Some(v) => w.line(0, &format!("Program version={v:?}")),
        None => w.line(0, "Program"),
    }
    for s in &p.statements {
        w.stmt(1, s);
    }
    w.out
}
