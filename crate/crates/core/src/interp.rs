//! Tree-walking execution of one PE.

use std::borrow::Cow;

use rustc_hash::FxHashMap as HashMap;
use std::io::BufRead;

use thiserror::Error;

use crate::ast::{
    Block, Declare, Expression, Locality, Loop, LoopCondition, LoopDirection, Program, RefName,
    Reference, Scope, Statement, StmtKind, TypeSpec,
};
use crate::lexer::Span;
use crate::pretty::reference_source;
use crate::runtime::{HeapError, Input, PeHandle, PeStatus, Site};
use crate::value::{
    arith, coerce, display, math_unary, truthiness, BinOp, SlotType, StoreError, Tag, Value,
    ValueError, VariableSlot,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ErrorKind {
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error(transparent)]
    Heap(#[from] HeapError),
    #[error("`{name}`: {source}")]
    Store { name: String, source: StoreError },
    #[error("undeclared variable `{0}`")]
    Undeclared(String),
    #[error("`{0}` is already declared in this scope")]
    Redeclared(String),
    #[error("UR outside predication")]
    UrOutsidePredication,
    #[error("array index must be an integer, got {0}")]
    BadIndex(String),
    #[error("array size must be a non-negative NUMBR, got {0}")]
    BadSize(String),
    #[error("cannot re-type `{name}`: it is statically typed {ty}")]
    StaticRetype { name: String, ty: SlotType },
    #[error("interactive input is single-PE only")]
    SinglePeInput,
    #[error("input error: {0}")]
    Input(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("{span}: {kind}")]
pub struct RuntimeError {
    pub span: Span,
    pub kind: ErrorKind,
}

type Result<T> = std::result::Result<T, ErrorKind>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flow {
    Normal,
    Break,
}

enum Binding {
    Local(VariableSlot),
    /// A symmetric variable living in this PE's heap segment.
    Shared,
}

/// Resolved storage location.
enum Location<'a> {
    Local {
        name: Cow<'a, str>,
        index: Option<i64>,
    },
    Heap {
        target: usize,
        name: Cow<'a, str>,
        index: Option<i64>,
    },
}

struct InputReader {
    source: Input,
    consumed: usize,
    stdin: Option<std::io::StdinLock<'static>>,
}

impl InputReader {
    fn line(&mut self) -> Result<String> {
        match &self.source {
            Input::Empty => Ok(String::new()),
            Input::Text(t) => {
                let rest = &t[self.consumed.min(t.len())..];
                let line = rest.split('\n').next().unwrap_or("");
                self.consumed += line.len() + 1;
                Ok(line.strip_suffix('\r').unwrap_or(line).to_string())
            }
            Input::Stdin => {
                let lock = self.stdin.get_or_insert_with(|| std::io::stdin().lock());
                let mut s = String::new();
                lock.read_line(&mut s)
                    .map_err(|e| ErrorKind::Input(e.to_string()))?;
                let s = s.strip_suffix('\n').unwrap_or(&s);
                Ok(s.strip_suffix('\r').unwrap_or(s).to_string())
            }
        }
    }
}

/// Lexical bindings, kept as one shadowing stack per name so a lookup is a
/// single hash probe however deep the block nesting.
struct Env {
    bindings: HashMap<String, Vec<(usize, Binding)>>,
    frames: Vec<Vec<String>>,
}

impl Env {
    fn new() -> Self {
        Env {
            bindings: HashMap::default(),
            frames: vec![Vec::new()],
        }
    }

    fn depth(&self) -> usize {
        self.frames.len() - 1
    }

    fn push(&mut self) {
        self.frames.push(Vec::new());
    }

    fn pop(&mut self) {
        for name in self.frames.pop().expect("frame") {
            if let Some(stack) = self.bindings.get_mut(&name) {
                stack.pop();
            }
        }
    }

    fn get_mut(&mut self, name: &str) -> Option<&mut Binding> {
        self.bindings.get_mut(name)?.last_mut().map(|(_, b)| b)
    }

    fn in_current_frame(&self, name: &str) -> bool {
        let depth = self.depth();
        self.bindings
            .get(name)
            .and_then(|s| s.last())
            .is_some_and(|(d, _)| *d == depth)
    }

    fn insert(&mut self, name: &str, b: Binding) {
        let depth = self.depth();
        match self.bindings.get_mut(name) {
            Some(stack) => stack.push((depth, b)),
            None => {
                self.bindings.insert(name.to_string(), vec![(depth, b)]);
            }
        }
        self.frames
            .last_mut()
            .expect("frame")
            .push(name.to_string());
    }
}

/// One PE's execution state.
pub struct PeContext<'h> {
    handle: PeHandle<'h>,
    env: Env,
    predication: Vec<usize>,
    loops: Vec<String>,
    output: Vec<String>,
    input: InputReader,
}

impl<'h> PeContext<'h> {
    pub fn new(handle: PeHandle<'h>, input: Input) -> Self {
        PeContext {
            handle,
            env: Env::new(),
            predication: Vec::new(),
            loops: Vec::new(),
            output: Vec::new(),
            input: InputReader {
                source: input,
                consumed: 0,
                stdin: None,
            },
        }
    }

    pub fn output(&self) -> &[String] {
        &self.output
    }

    pub fn predication_depth(&self) -> usize {
        self.predication.len()
    }

    fn scoped<T>(&mut self, f: impl FnOnce(&mut Self) -> T) -> T {
        self.env.push();
        let r = f(self);
        self.env.pop();
        r
    }

    fn predicated<T>(&mut self, pe: usize, f: impl FnOnce(&mut Self) -> T) -> T {
        self.predication.push(pe);
        let r = f(self);
        self.predication.pop();
        r
    }

    fn lookup(&mut self, name: &str) -> Option<&mut Binding> {
        self.env.get_mut(name)
    }

    pub fn exec_block(&mut self, block: &Block) -> std::result::Result<Flow, RuntimeError> {
        for s in block {
            if self.exec_statement(s)? == Flow::Break {
                return Ok(Flow::Break);
            }
        }
        Ok(Flow::Normal)
    }

    pub fn exec_statement(&mut self, s: &Statement) -> std::result::Result<Flow, RuntimeError> {
        let at = |kind| RuntimeError { span: s.span, kind };
        self.handle.tick().map_err(|e| at(e.into()))?;
        match &s.kind {
            StmtKind::If {
                cond,
                then,
                otherwise,
            } => {
                let c = self
                    .eval(cond)
                    .and_then(|v| Ok(truthiness(&v)?))
                    .map_err(at)?;
                let branch = if c { Some(then) } else { otherwise.as_ref() };
                match branch {
                    Some(b) => self.scoped(|cx| cx.exec_block(b)),
                    None => Ok(Flow::Normal),
                }
            }
            StmtKind::Switch {
                subject,
                arms,
                default,
            } => {
                let v = self.eval(subject).map_err(at)?;
                let mut start = None;
                for (i, (lit, _)) in arms.iter().enumerate() {
                    if matches!(arith(BinOp::BothSaem, &v, lit), Ok(Value::Troof(true))) {
                        start = Some(i);
                        break;
                    }
                }
                let blocks: Vec<&Block> = match start {
                    Some(i) => arms[i..].iter().map(|(_, b)| b).chain(default).collect(),
                    None => default.iter().collect(),
                };
                self.scoped(|cx| {
                    for b in blocks {
                        if cx.exec_block(b)? == Flow::Break {
                            break;
                        }
                    }
                    Ok(Flow::Normal)
                })
            }
            StmtKind::Loop(l) => self.exec_loop(l, s.span),
            StmtKind::Break => Ok(Flow::Break),
            StmtKind::TryLockIf {
                target,
                blocking,
                then,
                otherwise,
            } => {
                let name = self.ref_name(target).map_err(at)?;
                let got = if *blocking {
                    let site = Site::new(
                        s.span,
                        format!("IM SRSLY MESIN WIF {}", reference_source(target)),
                    );
                    self.handle.lock_acquire(&name, site).map(|_| true)
                } else {
                    self.handle.lock_try(&name)
                }
                .map_err(|e| at(e.into()))?;
                let branch = if got { Some(then) } else { otherwise.as_ref() };
                match branch {
                    Some(b) => self.scoped(|cx| cx.exec_block(b)),
                    None => Ok(Flow::Normal),
                }
            }
            StmtKind::Predicated { pe, inner } => {
                let target = self.eval_pe(pe).map_err(at)?;
                self.predicated(target, |cx| cx.exec_statement(inner))
            }
            StmtKind::PredicatedBlock { pe, body } => {
                let target = self.eval_pe(pe).map_err(at)?;
                self.predicated(target, |cx| cx.scoped(|cx| cx.exec_block(body)))
            }
            _ => self.exec_simple(s).map(|_| Flow::Normal).map_err(at),
        }
    }

    fn exec_loop(&mut self, l: &Loop, span: Span) -> std::result::Result<Flow, RuntimeError> {
        let at = |kind| RuntimeError { span, kind };
        self.loops.push(l.label.clone());
        let r = self.scoped(|cx| {
            if let Some((_, var)) = &l.update {
                cx.env
                    .insert(var, Binding::Local(VariableSlot::dynamic(Value::Numbr(0))));
            }
            loop {
                if let Some(cond) = &l.condition {
                    let (e, exit_on) = match cond {
                        LoopCondition::Til(e) => (e, true),
                        LoopCondition::Wile(e) => (e, false),
                    };
                    let v = cx.eval(e).and_then(|v| Ok(truthiness(&v)?)).map_err(at)?;
                    if v == exit_on {
                        break;
                    }
                }
                if cx.scoped(|cx| cx.exec_block(&l.body))? == Flow::Break {
                    break;
                }
                if let Some((dir, var)) = &l.update {
                    let op = match dir {
                        LoopDirection::Uppin => BinOp::Sum,
                        LoopDirection::Nerfin => BinOp::Diff,
                    };
                    let r = Reference::local(var);
                    let cur = cx.read_ref(&r).map_err(at)?;
                    let next = arith(op, &cur, &Value::Numbr(1)).map_err(|e| at(e.into()))?;
                    cx.write_ref(&r, next).map_err(at)?;
                }
            }
            Ok(Flow::Normal)
        });
        self.loops.pop();
        r
    }

    fn exec_simple(&mut self, s: &Statement) -> Result<()> {
        match &s.kind {
            StmtKind::Declare(d) => self.declare(d),
            StmtKind::Assign { target, expr } => {
                let v = self.eval(expr)?;
                self.write_ref(target, v)
            }
            StmtKind::Visible(args) => {
                let mut line = String::new();
                for a in args {
                    let v = self.eval(a)?;
                    line.push_str(&display(&v)?);
                }
                self.handle.emit(line.clone());
                self.output.push(line);
                Ok(())
            }
            StmtKind::Gimmeh(r) => {
                if self.handle.n_pes() > 1 {
                    return Err(ErrorKind::SinglePeInput);
                }
                let line = self.input.line()?;
                self.write_ref(r, Value::Yarn(line))
            }
            StmtKind::CanHas(_) => Ok(()),
            StmtKind::Cast { target, to } => self.cast_in_place(target, *to),
            StmtKind::Barrier => Ok(self.handle.barrier(Site::new(s.span, "HUGZ"))?),
            StmtKind::LockAcquire(r) => {
                let name = self.ref_name(r)?;
                let site = Site::new(
                    s.span,
                    format!("IM SRSLY MESIN WIF {}", reference_source(r)),
                );
                Ok(self.handle.lock_acquire(&name, site)?)
            }
            StmtKind::LockRelease(r) => {
                let name = self.ref_name(r)?;
                Ok(self.handle.lock_release(&name)?)
            }
            _ => unreachable!("compound statements are handled by exec_statement"),
        }
    }

    fn declare(&mut self, d: &Declare) -> Result<()> {
        if self.env.in_current_frame(&d.name) {
            return Err(ErrorKind::Redeclared(d.name.clone()));
        }
        let ty = match d.declared_type {
            None => None,
            Some(TypeSpec::Scalar(t)) => Some(SlotType::Scalar(t)),
            Some(TypeSpec::Array(elem)) => {
                let size = d.size_expr.as_ref().expect("parser requires THAR IZ");
                let n = match self.eval(size)? {
                    Value::Numbr(n) if n >= 0 => n as usize,
                    other => {
                        return Err(ErrorKind::BadSize(
                            display(&other).unwrap_or_else(|_| "ARRAY".into()),
                        ))
                    }
                };
                Some(SlotType::Array { elem, len: n })
            }
        };
        let init = d.init_expr.as_ref().map(|e| self.eval(e)).transpose()?;
        match d.scope {
            Scope::Shared => {
                let ty = ty.expect("parser requires a type on WE HAS A");
                self.handle.declare(&d.name, ty, d.shared_lock)?;
                self.env.insert(&d.name, Binding::Shared);
                if let Some(v) = init {
                    let pe = self.handle.pe();
                    self.handle.write(pe, &d.name, None, v)?;
                }
            }
            Scope::Local => {
                let slot = match (ty, d.strict) {
                    (Some(ty), true) => {
                        let mut slot = VariableSlot::typed(ty);
                        if let Some(v) = init {
                            slot.store(v).map_err(|e| store_err(&d.name, e))?;
                        }
                        slot
                    }
                    (Some(SlotType::Scalar(t)), false) => VariableSlot::dynamic(match init {
                        Some(v) => coerce(&v, t)?,
                        None => t.zero(),
                    }),
                    (Some(ty @ SlotType::Array { .. }), false) => VariableSlot::dynamic(ty.zero()),
                    (None, _) => VariableSlot::dynamic(init.unwrap_or(Value::Noob)),
                };
                self.env.insert(&d.name, Binding::Local(slot));
            }
        }
        Ok(())
    }

    fn cast_in_place(&mut self, target: &Reference, to: Tag) -> Result<()> {
        let loc = self.resolve(target)?;
        if let Location::Local { name, index: None } = &loc {
            if let Some(Binding::Local(slot)) = self.lookup(name) {
                if let Some(ty) = slot.static_type {
                    if ty != SlotType::Scalar(to) {
                        return Err(ErrorKind::StaticRetype {
                            name: name.to_string(),
                            ty,
                        });
                    }
                }
                slot.value = coerce(&slot.value, to)?;
                return Ok(());
            }
        }
        let v = self.load(&loc)?;
        let v = coerce(&v, to)?;
        self.store(&loc, v)
    }

    fn eval_pe(&mut self, e: &Expression) -> Result<usize> {
        let v = self.eval(e)?;
        let n = match coerce(&v, Tag::Numbr)? {
            Value::Numbr(n) => n,
            _ => unreachable!(),
        };
        Ok(self.handle.check_pe(n)?)
    }

    fn name_of<'a>(&mut self, name: &'a RefName) -> Result<Cow<'a, str>> {
        match name {
            RefName::Static(s) => Ok(Cow::Borrowed(s)),
            RefName::Dynamic(e) => {
                let v = self.eval(e)?;
                Ok(Cow::Owned(display(&v)?))
            }
        }
    }

    fn ref_name<'a>(&mut self, r: &'a Reference) -> Result<Cow<'a, str>> {
        self.name_of(&r.name)
    }

    fn index_of(&mut self, e: &Expression) -> Result<i64> {
        match self.eval(e)? {
            Value::Numbr(n) => Ok(n),
            Value::Numbar(x) if x.fract() == 0.0 => match coerce(&Value::Numbar(x), Tag::Numbr)? {
                Value::Numbr(n) => Ok(n),
                _ => unreachable!(),
            },
            v @ Value::Yarn(_) => match coerce(&v, Tag::Numbr) {
                Ok(Value::Numbr(n)) => Ok(n),
                _ => Err(ErrorKind::BadIndex(display(&v)?)),
            },
            other => Err(ErrorKind::BadIndex(
                display(&other).unwrap_or_else(|_| "ARRAY".into()),
            )),
        }
    }

    fn name_and_index<'a>(&mut self, r: &'a Reference) -> Result<(Cow<'a, str>, Option<i64>)> {
        let name = self.name_of(&r.name)?;
        let index = r.index.as_ref().map(|e| self.index_of(e)).transpose()?;
        Ok((name, index))
    }

    fn resolve<'a>(&mut self, r: &'a Reference) -> Result<Location<'a>> {
        let (name, index) = self.name_and_index(r)?;
        self.locate(r.locality, name, index)
    }

    fn locate<'a>(
        &mut self,
        locality: Locality,
        name: Cow<'a, str>,
        index: Option<i64>,
    ) -> Result<Location<'a>> {
        match locality {
            Locality::Ur => {
                let target = *self
                    .predication
                    .last()
                    .ok_or(ErrorKind::UrOutsidePredication)?;
                Ok(Location::Heap {
                    target,
                    name,
                    index,
                })
            }
            Locality::Mah | Locality::Unqualified => match self.lookup(&name) {
                Some(Binding::Local(_)) => Ok(Location::Local { name, index }),
                Some(Binding::Shared) => Ok(Location::Heap {
                    target: self.handle.pe(),
                    name,
                    index,
                }),
                None => Err(ErrorKind::Undeclared(name.into_owned())),
            },
        }
    }

    fn load(&mut self, loc: &Location) -> Result<Value> {
        match loc {
            Location::Local { name, index } => {
                let Some(Binding::Local(slot)) = self.lookup(name) else {
                    unreachable!()
                };
                match index {
                    None => Ok(slot.value.clone()),
                    Some(i) => slot.load_element(*i).map_err(|e| store_err(name, e)),
                }
            }
            Location::Heap {
                target,
                name,
                index,
            } => Ok(self.handle.read(*target, name, *index)?),
        }
    }

    fn store(&mut self, loc: &Location, v: Value) -> Result<()> {
        match loc {
            Location::Local { name, index } => {
                let Some(Binding::Local(slot)) = self.lookup(name) else {
                    unreachable!()
                };
                match index {
                    None => slot.store(v),
                    Some(i) => slot.store_element(*i, v),
                }
                .map_err(|e| store_err(name, e))
            }
            Location::Heap {
                target,
                name,
                index,
            } => Ok(self.handle.write(*target, name, *index, v)?),
        }
    }

    fn read_ref(&mut self, r: &Reference) -> Result<Value> {
        let (name, index) = self.name_and_index(r)?;
        if r.locality != Locality::Ur {
            if let Some(Binding::Local(slot)) = self.env.get_mut(&name) {
                return match index {
                    None => Ok(slot.value.clone()),
                    Some(i) => slot.load_element(i).map_err(|e| store_err(&name, e)),
                };
            }
        }
        let loc = self.locate(r.locality, name, index)?;
        self.load(&loc)
    }

    fn write_ref(&mut self, r: &Reference, v: Value) -> Result<()> {
        let (name, index) = self.name_and_index(r)?;
        if r.locality != Locality::Ur {
            if let Some(Binding::Local(slot)) = self.env.get_mut(&name) {
                return match index {
                    None => slot.store(v),
                    Some(i) => slot.store_element(i, v),
                }
                .map_err(|e| store_err(&name, e));
            }
        }
        let loc = self.locate(r.locality, name, index)?;
        self.store(&loc, v)
    }

    pub fn eval(&mut self, e: &Expression) -> Result<Value> {
        Ok(match e {
            Expression::Literal(v) => v.clone(),
            Expression::Ref(r) => self.read_ref(r)?,
            Expression::BinOp { op, lhs, rhs } => {
                let a = self.eval(lhs)?;
                let b = self.eval(rhs)?;
                arith(*op, &a, &b)?
            }
            Expression::Math { op, arg } => {
                let v = self.eval(arg)?;
                math_unary(*op, &v)?
            }
            Expression::Maek { arg, to } => {
                let v = self.eval(arg)?;
                coerce(&v, *to)?
            }
            Expression::Me => Value::Numbr(self.handle.pe() as i64),
            Expression::MahFrenz => Value::Numbr(self.handle.n_pes() as i64),
            Expression::Whatevr => Value::Numbr(self.handle.next_int()),
            Expression::Whatevar => Value::Numbar(self.handle.next_float()),
        })
    }
}

fn store_err(name: &str, source: StoreError) -> ErrorKind {
    ErrorKind::Store {
        name: name.into(),
        source,
    }
}

/// What a PE thread hands back when it stops.
#[derive(Debug, Clone)]
pub struct PeExit {
    pub lines: Vec<String>,
    pub status: PeStatus,
}

/// Run `program` on one PE to completion or failure.
pub fn run_pe(program: &Program, handle: PeHandle<'_>, input: Input) -> PeExit {
    let heap = handle.heap();
    let pe = handle.pe();
    let mut cx = PeContext::new(handle, input);
    let result = cx.exec_block(&program.statements);
    let status = match result {
        Ok(_) => {
            assert_eq!(cx.predication_depth(), 0, "unbalanced predication");
            // a deadlock exposed by finishing is recorded on the heap
            let _ = cx.handle.finish();
            PeStatus::Finished
        }
        Err(RuntimeError {
            kind: ErrorKind::Heap(HeapError::Aborted | HeapError::Deadlock(_)),
            ..
        }) => {
            heap.halt(pe);
            PeStatus::Halted
        }
        Err(e) => {
            heap.fail(pe, e.span, e.kind.to_string());
            PeStatus::Failed
        }
    };
    PeExit {
        lines: cx.output,
        status,
    }
}
