use serde_json::{json, Map, Value};
use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RelOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl RelOp {
    pub const ALL: [RelOp; 6] = [
        RelOp::Lt,
        RelOp::Le,
        RelOp::Gt,
        RelOp::Ge,
        RelOp::Eq,
        RelOp::Ne,
    ];

    pub fn symbol(self) -> &'static str {
        match self {
            RelOp::Lt => "<",
            RelOp::Le => "<=",
            RelOp::Gt => ">",
            RelOp::Ge => ">=",
            RelOp::Eq => "==",
            RelOp::Ne => "!=",
        }
    }

    pub fn parse(s: &str) -> Option<RelOp> {
        Some(match s {
            "<" => RelOp::Lt,
            "<=" | "≤" => RelOp::Le,
            ">" => RelOp::Gt,
            ">=" | "≥" => RelOp::Ge,
            "==" => RelOp::Eq,
            "!=" | "~=" | "≠" => RelOp::Ne,
            _ => return None,
        })
    }

    pub fn apply(self, a: f64, b: f64) -> bool {
        match self {
            RelOp::Lt => a < b,
            RelOp::Le => a <= b,
            RelOp::Gt => a > b,
            RelOp::Ge => a >= b,
            RelOp::Eq => a == b,
            RelOp::Ne => a != b,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LogicOp {
    And,
    Or,
    Xor,
    Not,
}

impl LogicOp {
    pub fn name(self) -> &'static str {
        match self {
            LogicOp::And => "AND",
            LogicOp::Or => "OR",
            LogicOp::Xor => "XOR",
            LogicOp::Not => "NOT",
        }
    }

    pub fn parse(s: &str) -> Option<LogicOp> {
        Some(match s.to_ascii_uppercase().as_str() {
            "AND" => LogicOp::And,
            "OR" => LogicOp::Or,
            "XOR" => LogicOp::Xor,
            "NOT" => LogicOp::Not,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Extremum {
    Min,
    Max,
}

/// Block behaviour and parameters. Every block has a single output port `out`.
#[derive(Debug, Clone, PartialEq)]
pub enum BlockKind {
    Constant {
        value: f64,
        boolean: bool,
    },
    /// One `+1`/`-1` sign per input.
    Sum {
        signs: Vec<i8>,
    },
    Product {
        inputs: usize,
    },
    Gain {
        factor: f64,
    },
    RelationalOp {
        op: RelOp,
    },
    /// `negate` inverts the result; on a NOT block it cancels the inversion.
    LogicalOp {
        op: LogicOp,
        inputs: usize,
        negate: bool,
    },
    /// Passes `in1` when `in2 >= threshold`, otherwise `in3`.
    Switch {
        threshold: f64,
    },
    UnitDelay {
        initial: f64,
    },
    DiscreteIntegrator {
        initial: f64,
    },
    Saturation {
        lo: f64,
        hi: f64,
    },
    Abs,
    MinMax {
        function: Extremum,
        inputs: usize,
    },
}

impl BlockKind {
    pub fn arity(&self) -> usize {
        match self {
            BlockKind::Constant { .. } => 0,
            BlockKind::Sum { signs } => signs.len(),
            BlockKind::Product { inputs } => *inputs,
            BlockKind::Gain { .. } | BlockKind::Abs | BlockKind::Saturation { .. } => 1,
            BlockKind::UnitDelay { .. } | BlockKind::DiscreteIntegrator { .. } => 1,
            BlockKind::RelationalOp { .. } => 2,
            BlockKind::LogicalOp { op, inputs, .. } => {
                if *op == LogicOp::Not {
                    1
                } else {
                    *inputs
                }
            }
            BlockKind::Switch { .. } => 3,
            BlockKind::MinMax { inputs, .. } => *inputs,
        }
    }

    /// State blocks emit last step's state, so they break algebraic loops.
    pub fn is_stateful(&self) -> bool {
        matches!(
            self,
            BlockKind::UnitDelay { .. } | BlockKind::DiscreteIntegrator { .. }
        )
    }

    /// Number of coverage branches the block contributes.
    pub fn branch_count(&self) -> usize {
        match self {
            BlockKind::Switch { .. } | BlockKind::RelationalOp { .. } => 2,
            _ => 0,
        }
    }

    pub fn type_name(&self) -> &'static str {
        match self {
            BlockKind::Constant { .. } => "Constant",
            BlockKind::Sum { .. } => "Sum",
            BlockKind::Product { .. } => "Product",
            BlockKind::Gain { .. } => "Gain",
            BlockKind::RelationalOp { .. } => "RelationalOp",
            BlockKind::LogicalOp { .. } => "LogicalOp",
            BlockKind::Switch { .. } => "Switch",
            BlockKind::UnitDelay { .. } => "UnitDelay",
            BlockKind::DiscreteIntegrator { .. } => "DiscreteIntegrator",
            BlockKind::Saturation { .. } => "Saturation",
            BlockKind::Abs => "Abs",
            BlockKind::MinMax { .. } => "MinMax",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Load(msg));
        match self {
            BlockKind::Sum { signs } if signs.is_empty() => {
                bad("Sum needs at least one input".into())
            }
            BlockKind::Product { inputs } | BlockKind::MinMax { inputs, .. } if *inputs == 0 => {
                bad(format!("{} needs at least one input", self.type_name()))
            }
            BlockKind::LogicalOp { op, inputs, .. } if *op != LogicOp::Not && *inputs < 2 => {
                bad(format!("{} needs at least two inputs", op.name()))
            }
            BlockKind::Saturation { lo, hi } if lo > hi => {
                bad(format!("Saturation bounds [{lo}, {hi}] are empty"))
            }
            _ => Ok(()),
        }
    }

    pub fn from_params(kind: &str, params: &Value) -> Result<Self> {
        let empty = Map::new();
        let p = params.as_object().unwrap_or(&empty);
        let num = |key: &str| -> Result<f64> {
            p.get(key)
                .and_then(Value::as_f64)
                .ok_or_else(|| Error::Load(format!("{kind}: missing numeric parameter `{key}`")))
        };
        let num_or = |key: &str, default: f64| -> Result<f64> {
            match p.get(key) {
                None => Ok(default),
                Some(v) => v.as_f64().ok_or_else(|| {
                    Error::Load(format!("{kind}: parameter `{key}` must be a number"))
                }),
            }
        };
        let count_or = |key: &str, default: usize| -> Result<usize> {
            match p.get(key) {
                None => Ok(default),
                Some(v) => v.as_u64().map(|n| n as usize).ok_or_else(|| {
                    Error::Load(format!("{kind}: parameter `{key}` must be a count"))
                }),
            }
        };
        let text = |key: &str| -> Result<&str> {
            p.get(key)
                .and_then(Value::as_str)
                .ok_or_else(|| Error::Load(format!("{kind}: missing string parameter `{key}`")))
        };
        let block = match kind {
            "Constant" => {
                let boolean = p.get("boolean").and_then(Value::as_bool).unwrap_or(false);
                let value = match p.get("value") {
                    Some(Value::Bool(b)) => f64::from(u8::from(*b)),
                    _ => num("value")?,
                };
                BlockKind::Constant { value, boolean }
            }
            "Sum" => {
                let signs = text("signs")?
                    .chars()
                    .map(|c| match c {
                        '+' => Ok(1),
                        '-' | '−' => Ok(-1),
                        other => Err(Error::Load(format!("Sum: bad sign character `{other}`"))),
                    })
                    .collect::<Result<Vec<i8>>>()?;
                BlockKind::Sum { signs }
            }
            "Product" => BlockKind::Product {
                inputs: count_or("inputs", 2)?,
            },
            "Gain" => BlockKind::Gain {
                factor: num("factor")?,
            },
            "RelationalOp" => {
                let op = text("op")?;
                BlockKind::RelationalOp {
                    op: RelOp::parse(op).ok_or_else(|| {
                        Error::Load(format!("unknown relational operator `{op}`"))
                    })?,
                }
            }
            "LogicalOp" => {
                let name = text("op")?;
                let op = LogicOp::parse(name)
                    .ok_or_else(|| Error::Load(format!("unknown logical operator `{name}`")))?;
                let default_inputs = if op == LogicOp::Not { 1 } else { 2 };
                BlockKind::LogicalOp {
                    op,
                    inputs: count_or("inputs", default_inputs)?,
                    negate: p.get("negate").and_then(Value::as_bool).unwrap_or(false),
                }
            }
            "Switch" => BlockKind::Switch {
                threshold: num_or("threshold", 0.0)?,
            },
            "UnitDelay" => BlockKind::UnitDelay {
                initial: num_or("initial", 0.0)?,
            },
            "DiscreteIntegrator" => BlockKind::DiscreteIntegrator {
                initial: num_or("initial", 0.0)?,
            },
            "Saturation" => BlockKind::Saturation {
                lo: num("lo")?,
                hi: num("hi")?,
            },
            "Abs" => BlockKind::Abs,
            "MinMax" => {
                let f = text("function")?;
                let function = match f.to_ascii_lowercase().as_str() {
                    "min" => Extremum::Min,
                    "max" => Extremum::Max,
                    _ => return Err(Error::Load(format!("MinMax: unknown function `{f}`"))),
                };
                BlockKind::MinMax {
                    function,
                    inputs: count_or("inputs", 2)?,
                }
            }
            other => return Err(Error::Load(format!("unknown block kind `{other}`"))),
        };
        block.validate()?;
        Ok(block)
    }

    pub fn params(&self) -> Value {
        match self {
            BlockKind::Constant { value, boolean } => json!({ "value": value, "boolean": boolean }),
            BlockKind::Sum { signs } => json!({ "signs": signs_string(signs) }),
            BlockKind::Product { inputs } => json!({ "inputs": inputs }),
            BlockKind::Gain { factor } => json!({ "factor": factor }),
            BlockKind::RelationalOp { op } => json!({ "op": op.symbol() }),
            BlockKind::LogicalOp { op, inputs, negate } => {
                json!({ "op": op.name(), "inputs": inputs, "negate": negate })
            }
            BlockKind::Switch { threshold } => json!({ "threshold": threshold }),
            BlockKind::UnitDelay { initial } | BlockKind::DiscreteIntegrator { initial } => {
                json!({ "initial": initial })
            }
            BlockKind::Saturation { lo, hi } => json!({ "lo": lo, "hi": hi }),
            BlockKind::Abs => json!({}),
            BlockKind::MinMax { function, inputs } => json!({
                "function": match function { Extremum::Min => "min", Extremum::Max => "max" },
                "inputs": inputs,
            }),
        }
    }
}

pub fn signs_string(signs: &[i8]) -> String {
    signs
        .iter()
        .map(|&s| if s >= 0 { '+' } else { '-' })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub id: String,
    pub kind: BlockKind,
}

impl fmt::Display for Block {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}({})", self.id, self.kind.type_name())
    }
}
