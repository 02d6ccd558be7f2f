//! Syntax tree.

use crate::lexer::Span;
use crate::value::{BinOp, MathOp, Tag, Value};

#[derive(Debug, Clone, PartialEq)]
pub struct Program {
    pub version: Option<f64>,
    pub statements: Vec<Statement>,
}

pub type Block = Vec<Statement>;

#[derive(Debug, Clone, PartialEq)]
pub struct Statement {
    pub kind: StmtKind,
    pub span: Span,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Local,
    Shared,
}

/// Declared type clause of a declaration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TypeSpec {
    Scalar(Tag),
    Array(Tag),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LoopDirection {
    Uppin,
    Nerfin,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LoopCondition {
    Til(Expression),
    Wile(Expression),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Declare {
    pub scope: Scope,
    pub name: String,
    pub declared_type: Option<TypeSpec>,
    /// `SRSLY`: the slot keeps its type for its whole lifetime.
    pub strict: bool,
    pub size_expr: Option<Expression>,
    pub init_expr: Option<Expression>,
    pub shared_lock: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Loop {
    pub label: String,
    pub update: Option<(LoopDirection, String)>,
    pub condition: Option<LoopCondition>,
    pub body: Block,
}

#[derive(Debug, Clone, PartialEq)]
pub enum StmtKind {
    Declare(Declare),
    Assign {
        target: Reference,
        expr: Expression,
    },
    Visible(Vec<Expression>),
    Gimmeh(Reference),
    CanHas(String),
    If {
        cond: Expression,
        then: Block,
        otherwise: Option<Block>,
    },
    Switch {
        subject: Expression,
        arms: Vec<(Value, Block)>,
        default: Option<Block>,
    },
    Loop(Loop),
    Break,
    Cast {
        target: Reference,
        to: Tag,
    },
    Barrier,
    LockAcquire(Reference),
    LockRelease(Reference),
    /// `IM MESIN WIF x, O RLY?`. `blocking` is set for the
    /// `IM SRSLY MESIN WIF x, O RLY?` spelling, which always succeeds.
    TryLockIf {
        target: Reference,
        blocking: bool,
        then: Block,
        otherwise: Option<Block>,
    },
    Predicated {
        pe: Expression,
        inner: Box<Statement>,
    },
    PredicatedBlock {
        pe: Expression,
        body: Block,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Locality {
    Unqualified,
    Mah,
    Ur,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RefName {
    Static(String),
    /// `SRS expr`: identifier computed at run time.
    Dynamic(Box<Expression>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Reference {
    pub name: RefName,
    pub index: Option<Box<Expression>>,
    pub locality: Locality,
}

impl Reference {
    pub fn local(name: &str) -> Self {
        Reference {
            name: RefName::Static(name.into()),
            index: None,
            locality: Locality::Unqualified,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Expression {
    Literal(Value),
    Ref(Reference),
    BinOp {
        op: BinOp,
        lhs: Box<Expression>,
        rhs: Box<Expression>,
    },
    Math {
        op: MathOp,
        arg: Box<Expression>,
    },
    Maek {
        arg: Box<Expression>,
        to: Tag,
    },
    Me,
    MahFrenz,
    Whatevr,
    Whatevar,
}
