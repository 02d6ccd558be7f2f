//! Runtime values, coercions, truthiness and display formatting.

use std::fmt;

use thiserror::Error;

/// Type tag of a runtime value.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Tag {
    Noob,
    Troof,
    Numbr,
    Numbar,
    Yarn,
    Array,
}

impl Tag {
    pub fn name(self) -> &'static str {
        match self {
            Tag::Noob => "NOOB",
            Tag::Troof => "TROOF",
            Tag::Numbr => "NUMBR",
            Tag::Numbar => "NUMBAR",
            Tag::Yarn => "YARN",
            Tag::Array => "ARRAY",
        }
    }

    /// Default contents of a fresh slot of this type.
    pub fn zero(self) -> Value {
        match self {
            Tag::Noob | Tag::Array => Value::Noob,
            Tag::Troof => Value::Troof(false),
            Tag::Numbr => Value::Numbr(0),
            Tag::Numbar => Value::Numbar(0.0),
            Tag::Yarn => Value::Yarn(String::new()),
        }
    }
}

impl fmt::Display for Tag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Homogeneous, fixed-length array value.
#[derive(Debug, Clone, PartialEq)]
pub struct ArrayValue {
    pub elem: Tag,
    pub items: Vec<Value>,
}

impl ArrayValue {
    pub fn zeroed(elem: Tag, len: usize) -> Self {
        ArrayValue {
            elem,
            items: vec![elem.zero(); len],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Noob,
    Troof(bool),
    Numbr(i64),
    Numbar(f64),
    Yarn(String),
    Array(ArrayValue),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ValueError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("NUMBR overflow in {0}")]
    Overflow(&'static str),
    #[error("NUMBAR result is not finite in {0}")]
    NonFinite(&'static str),
    #[error("cannot cast {from} to {to}: {detail}")]
    Cast { from: Tag, to: Tag, detail: String },
    #[error("{op} expects a numeric operand, got {got}")]
    NotNumeric { op: &'static str, got: Tag },
    #[error("whole arrays cannot be used in {0}")]
    ArrayNotAllowed(&'static str),
    #[error("square root of negative number {0}")]
    NegativeSqrt(f64),
}

impl Value {
    pub fn tag(&self) -> Tag {
        match self {
            Value::Noob => Tag::Noob,
            Value::Troof(_) => Tag::Troof,
            Value::Numbr(_) => Tag::Numbr,
            Value::Numbar(_) => Tag::Numbar,
            Value::Yarn(_) => Tag::Yarn,
            Value::Array(_) => Tag::Array,
        }
    }
}

fn check_finite(x: f64, op: &'static str) -> Result<Value, ValueError> {
    if x.is_finite() {
        Ok(Value::Numbar(x))
    } else {
        Err(ValueError::NonFinite(op))
    }
}

/// Accepts `-?digits(.digits)?([eE][+-]?digits)?`, which covers every
/// literal the lexer accepts and everything `display` produces.
fn numeric_literal(s: &str) -> Option<Value> {
    let bytes = s.as_bytes();
    let mut i = 0;
    if bytes.first() == Some(&b'-') {
        i += 1;
    }
    let digits = |i: &mut usize| {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        *i > start
    };
    if !digits(&mut i) {
        return None;
    }
    let mut integral = true;
    if i < bytes.len() && bytes[i] == b'.' {
        i += 1;
        integral = false;
        if !digits(&mut i) {
            return None;
        }
    }
    if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
        i += 1;
        integral = false;
        if i < bytes.len() && (bytes[i] == b'+' || bytes[i] == b'-') {
            i += 1;
        }
        if !digits(&mut i) {
            return None;
        }
    }
    if i != bytes.len() {
        return None;
    }
    if integral {
        if let Ok(n) = s.parse::<i64>() {
            return Some(Value::Numbr(n));
        }
    }
    s.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .map(Value::Numbar)
}

fn cast_err(v: &Value, to: Tag, detail: impl Into<String>) -> ValueError {
    ValueError::Cast {
        from: v.tag(),
        to,
        detail: detail.into(),
    }
}

/// Explicit or implicit conversion to a scalar type.
pub fn coerce(v: &Value, target: Tag) -> Result<Value, ValueError> {
    if target == Tag::Array {
        return Err(cast_err(v, target, "arrays are not a cast target"));
    }
    if let Value::Array(_) = v {
        return Err(cast_err(v, target, "arrays cannot be cast"));
    }
    if let Value::Noob = v {
        return Ok(target.zero());
    }
    Ok(match target {
        Tag::Noob => Value::Noob,
        Tag::Troof => Value::Troof(truthiness(v)?),
        Tag::Yarn => Value::Yarn(display(v)?),
        Tag::Numbr => match v {
            Value::Numbr(n) => Value::Numbr(*n),
            Value::Numbar(x) => Value::Numbr(
                truncate(*x)
                    .ok_or_else(|| cast_err(v, target, format!("{x} is out of NUMBR range")))?,
            ),
            Value::Troof(b) => Value::Numbr(*b as i64),
            Value::Yarn(s) => match numeric_literal(s) {
                Some(Value::Numbr(n)) => Value::Numbr(n),
                Some(Value::Numbar(x)) => Value::Numbr(
                    truncate(x)
                        .ok_or_else(|| cast_err(v, target, format!("{x} is out of NUMBR range")))?,
                ),
                _ => return Err(cast_err(v, target, format!("\"{s}\" is not a number"))),
            },
            Value::Noob | Value::Array(_) => unreachable!(),
        },
        Tag::Numbar => match v {
            Value::Numbr(n) => Value::Numbar(*n as f64),
            Value::Numbar(x) => Value::Numbar(*x),
            Value::Troof(b) => Value::Numbar(if *b { 1.0 } else { 0.0 }),
            Value::Yarn(s) => match numeric_literal(s) {
                Some(Value::Numbr(n)) => Value::Numbar(n as f64),
                Some(Value::Numbar(x)) => Value::Numbar(x),
                _ => return Err(cast_err(v, target, format!("\"{s}\" is not a number"))),
            },
            Value::Noob | Value::Array(_) => unreachable!(),
        },
        Tag::Array => unreachable!(),
    })
}

fn truncate(x: f64) -> Option<i64> {
    let t = x.trunc();
    // i64::MAX as f64 rounds up to 2^63, which is itself out of range
    if t >= -(2f64.powi(63)) && t < 2f64.powi(63) {
        Some(t as i64)
    } else {
        None
    }
}

pub fn truthiness(v: &Value) -> Result<bool, ValueError> {
    Ok(match v {
        Value::Noob => false,
        Value::Troof(b) => *b,
        Value::Numbr(n) => *n != 0,
        Value::Numbar(x) => *x != 0.0,
        Value::Yarn(s) => !s.is_empty(),
        Value::Array(_) => return Err(ValueError::ArrayNotAllowed("a condition")),
    })
}

/// Text form used by VISIBLE and casts to YARN.
pub fn display(v: &Value) -> Result<String, ValueError> {
    Ok(match v {
        Value::Noob => "NOOB".into(),
        Value::Troof(true) => "WIN".into(),
        Value::Troof(false) => "FAIL".into(),
        Value::Numbr(n) => n.to_string(),
        // Debug gives the shortest round-tripping form and always keeps a
        // fractional digit when no exponent is used.
        Value::Numbar(x) => format!("{x:?}"),
        Value::Yarn(s) => s.clone(),
        Value::Array(_) => return Err(ValueError::ArrayNotAllowed("VISIBLE")),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Sum,
    Diff,
    Produkt,
    Quoshunt,
    Mod,
    BothSaem,
    Diffrint,
    Bigger,
    Smallr,
}

impl BinOp {
    pub fn name(self) -> &'static str {
        match self {
            BinOp::Sum => "SUM OF",
            BinOp::Diff => "DIFF OF",
            BinOp::Produkt => "PRODUKT OF",
            BinOp::Quoshunt => "QUOSHUNT OF",
            BinOp::Mod => "MOD OF",
            BinOp::BothSaem => "BOTH SAEM",
            BinOp::Diffrint => "DIFFRINT",
            BinOp::Bigger => "BIGGER",
            BinOp::Smallr => "SMALLR",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MathOp {
    Squar,
    Unsquar,
    Flip,
}

impl MathOp {
    pub fn name(self) -> &'static str {
        match self {
            MathOp::Squar => "SQUAR OF",
            MathOp::Unsquar => "UNSQUAR OF",
            MathOp::Flip => "FLIP OF",
        }
    }
}

enum Num {
    Int(i64),
    Float(f64),
}

fn numeric(v: &Value, op: &'static str) -> Result<Num, ValueError> {
    match v {
        Value::Numbr(n) => Ok(Num::Int(*n)),
        Value::Numbar(x) => Ok(Num::Float(*x)),
        Value::Troof(b) => Ok(Num::Int(*b as i64)),
        Value::Yarn(s) => match numeric_literal(s) {
            Some(Value::Numbr(n)) => Ok(Num::Int(n)),
            Some(Value::Numbar(x)) => Ok(Num::Float(x)),
            _ => Err(cast_err(v, Tag::Numbar, format!("\"{s}\" is not a number"))),
        },
        Value::Array(_) => Err(ValueError::ArrayNotAllowed(op)),
        Value::Noob => Err(ValueError::NotNumeric { op, got: Tag::Noob }),
    }
}

fn as_float(n: &Num) -> f64 {
    match n {
        Num::Int(i) => *i as f64,
        Num::Float(x) => *x,
    }
}

fn equal(a: &Value, b: &Value) -> Result<bool, ValueError> {
    Ok(match (a, b) {
        (Value::Numbr(x), Value::Numbr(y)) => x == y,
        (Value::Numbr(_) | Value::Numbar(_), Value::Numbr(_) | Value::Numbar(_)) => {
            as_float(&numeric(a, "BOTH SAEM")?) == as_float(&numeric(b, "BOTH SAEM")?)
        }
        (Value::Yarn(x), Value::Yarn(y)) => x == y,
        (Value::Troof(x), Value::Troof(y)) => x == y,
        (Value::Noob, Value::Noob) => true,
        (Value::Array(_), _) | (_, Value::Array(_)) => {
            return Err(ValueError::ArrayNotAllowed("a comparison"))
        }
        _ => false,
    })
}

fn ordered(op: BinOp, a: &Value, b: &Value) -> Result<bool, ValueError> {
    let name = op.name();
    for v in [a, b] {
        if let Value::Yarn(_) = v {
            return Err(ValueError::NotNumeric {
                op: name,
                got: Tag::Yarn,
            });
        }
    }
    let (x, y) = (numeric(a, name)?, numeric(b, name)?);
    let greater = match (&x, &y) {
        (Num::Int(p), Num::Int(q)) => match op {
            BinOp::Bigger => p > q,
            _ => p < q,
        },
        _ => {
            let (p, q) = (as_float(&x), as_float(&y));
            match op {
                BinOp::Bigger => p > q,
                _ => p < q,
            }
        }
    };
    Ok(greater)
}

/// Binary operators: arithmetic promotes to NUMBAR when either side is a
/// NUMBAR; comparisons yield TROOF.
pub fn arith(op: BinOp, a: &Value, b: &Value) -> Result<Value, ValueError> {
    match op {
        BinOp::BothSaem => return Ok(Value::Troof(equal(a, b)?)),
        BinOp::Diffrint => return Ok(Value::Troof(!equal(a, b)?)),
        BinOp::Bigger | BinOp::Smallr => return Ok(Value::Troof(ordered(op, a, b)?)),
        _ => {}
    }
    let name = op.name();
    let (x, y) = (numeric(a, name)?, numeric(b, name)?);
    match (x, y) {
        (Num::Int(p), Num::Int(q)) => {
            let r = match op {
                BinOp::Sum => p.checked_add(q),
                BinOp::Diff => p.checked_sub(q),
                BinOp::Produkt => p.checked_mul(q),
                BinOp::Quoshunt | BinOp::Mod if q == 0 => return Err(ValueError::DivisionByZero),
                BinOp::Quoshunt => p.checked_div(q),
                BinOp::Mod => p.checked_rem(q),
                _ => unreachable!(),
            };
            r.map(Value::Numbr).ok_or(ValueError::Overflow(name))
        }
        (x, y) => {
            let (p, q) = (as_float(&x), as_float(&y));
            let r = match op {
                BinOp::Sum => p + q,
                BinOp::Diff => p - q,
                BinOp::Produkt => p * q,
                BinOp::Quoshunt | BinOp::Mod if q == 0.0 => return Err(ValueError::DivisionByZero),
                BinOp::Quoshunt => p / q,
                BinOp::Mod => p % q,
                _ => unreachable!(),
            };
            check_finite(r, name)
        }
    }
}

pub fn math_unary(op: MathOp, v: &Value) -> Result<Value, ValueError> {
    let name = op.name();
    match (op, numeric(v, name)?) {
        (MathOp::Squar, Num::Int(n)) => n
            .checked_mul(n)
            .map(Value::Numbr)
            .ok_or(ValueError::Overflow(name)),
        (MathOp::Squar, Num::Float(x)) => check_finite(x * x, name),
        (MathOp::Unsquar, n) => {
            let x = as_float(&n);
            if x < 0.0 {
                return Err(ValueError::NegativeSqrt(x));
            }
            check_finite(x.sqrt(), name)
        }
        (MathOp::Flip, n) => {
            let x = as_float(&n);
            if x == 0.0 {
                return Err(ValueError::DivisionByZero);
            }
            check_finite(1.0 / x, name)
        }
    }
}

/// Declared type of a variable slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SlotType {
    Scalar(Tag),
    Array { elem: Tag, len: usize },
}

impl SlotType {
    pub fn zero(self) -> Value {
        match self {
            SlotType::Scalar(t) => t.zero(),
            SlotType::Array { elem, len } => Value::Array(ArrayValue::zeroed(elem, len)),
        }
    }
}

impl fmt::Display for SlotType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SlotType::Scalar(t) => write!(f, "{t}"),
            SlotType::Array { elem, len } => write!(f, "{elem}[{len}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum StoreError {
    #[error(transparent)]
    Value(#[from] ValueError),
    #[error("cannot store {got} in a variable of static type {want}")]
    TypeMismatch { want: SlotType, got: String },
    #[error("index {index} out of bounds for array of size {size}")]
    IndexOutOfBounds { index: i64, size: usize },
    #[error("variable is not an array")]
    NotAnArray,
}

/// A named storage cell, local or symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct VariableSlot {
    pub value: Value,
    pub static_type: Option<SlotType>,
    pub is_shared: bool,
    pub has_lock: bool,
}

impl VariableSlot {
    pub fn dynamic(value: Value) -> Self {
        VariableSlot {
            value,
            static_type: None,
            is_shared: false,
            has_lock: false,
        }
    }

    pub fn typed(ty: SlotType) -> Self {
        VariableSlot {
            value: ty.zero(),
            static_type: Some(ty),
            is_shared: false,
            has_lock: false,
        }
    }

    /// Whole-slot store, enforcing the static type if there is one.
    pub fn store(&mut self, v: Value) -> Result<(), StoreError> {
        self.value = conform(self.static_type, v)?;
        Ok(())
    }

    pub fn load_element(&self, index: i64) -> Result<Value, StoreError> {
        match &self.value {
            Value::Array(a) => element_index(index, a.items.len()).map(|i| a.items[i].clone()),
            _ => Err(StoreError::NotAnArray),
        }
    }

    pub fn store_element(&mut self, index: i64, v: Value) -> Result<(), StoreError> {
        match &mut self.value {
            Value::Array(a) => {
                let i = element_index(index, a.items.len())?;
                a.items[i] = conform_element(a.elem, v)?;
                Ok(())
            }
            _ => Err(StoreError::NotAnArray),
        }
    }
}

pub fn element_index(index: i64, size: usize) -> Result<usize, StoreError> {
    usize::try_from(index)
        .ok()
        .filter(|&i| i < size)
        .ok_or(StoreError::IndexOutOfBounds { index, size })
}

/// Coerce an element into an array's element type. Only numeric/YARN
/// conversions happen implicitly.
pub fn conform_element(elem: Tag, v: Value) -> Result<Value, StoreError> {
    conform(Some(SlotType::Scalar(elem)), v)
}

/// Apply static-typing rules to a value about to be stored.
pub fn conform(ty: Option<SlotType>, v: Value) -> Result<Value, StoreError> {
    match ty {
        None => Ok(v),
        Some(want @ SlotType::Array { elem, len }) => match v {
            Value::Array(a) if a.elem == elem && a.items.len() == len => Ok(Value::Array(a)),
            Value::Array(a) => Err(StoreError::TypeMismatch {
                want,
                got: SlotType::Array {
                    elem: a.elem,
                    len: a.items.len(),
                }
                .to_string(),
            }),
            other => Err(StoreError::TypeMismatch {
                want,
                got: other.tag().to_string(),
            }),
        },
        Some(want @ SlotType::Scalar(t)) => {
            if v.tag() == t {
                return Ok(v);
            }
            let implicit = matches!(
                (v.tag(), t),
                (
                    Tag::Numbr | Tag::Numbar | Tag::Yarn,
                    Tag::Numbr | Tag::Numbar
                )
            );
            if implicit {
                Ok(coerce(&v, t)?)
            } else {
                Err(StoreError::TypeMismatch {
                    want,
                    got: v.tag().to_string(),
                })
            }
        }
    }
}
