use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Time integrator selection, parsed from ids such as `mpe`, `mprk22(alpha=0.5)` or `mpdec4`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegratorId {
    ExplicitEuler,
    Ssprk2,
    Ssprk3,
    /// Explicit two-stage method with `a21 = alpha`, `b = (1 - 1/(2 alpha), 1/(2 alpha))`.
    Rk22 { alpha: f64 },
    /// Explicit deferred correction.
    Dec { order: usize },
    Mpe,
    Mprk22 { alpha: f64 },
    Mpssprk3,
    Mpdec { order: usize },
}

impl IntegratorId {
    pub const DEC_ORDERS: std::ops::RangeInclusive<usize> = 1..=5;

    pub fn is_patankar(&self) -> bool {
        matches!(
            self,
            IntegratorId::Mpe | IntegratorId::Mprk22 { .. } | IntegratorId::Mpssprk3 | IntegratorId::Mpdec { .. }
        )
    }

    /// Design order of accuracy.
    pub fn order(&self) -> usize {
        match *self {
            IntegratorId::ExplicitEuler | IntegratorId::Mpe => 1,
            IntegratorId::Ssprk2 | IntegratorId::Rk22 { .. } | IntegratorId::Mprk22 { .. } => 2,
            IntegratorId::Ssprk3 | IntegratorId::Mpssprk3 => 3,
            IntegratorId::Dec { order } | IntegratorId::Mpdec { order } => order,
        }
    }

    /// The explicit method obtained by setting every Patankar weight to one.
    pub fn underlying_explicit(&self) -> IntegratorId {
        match *self {
            IntegratorId::Mpe => IntegratorId::ExplicitEuler,
            IntegratorId::Mprk22 { alpha } => IntegratorId::Rk22 { alpha },
            IntegratorId::Mpssprk3 => IntegratorId::Ssprk3,
            IntegratorId::Mpdec { order } => IntegratorId::Dec { order },
            other => other,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            IntegratorId::Rk22 { alpha } | IntegratorId::Mprk22 { alpha } => {
                if !(alpha >= 0.5 && alpha.is_finite()) {
                    return Err(Error::param(format!("mprk22 needs alpha >= 1/2, got {alpha}")));
                }
            }
            IntegratorId::Dec { order } | IntegratorId::Mpdec { order } => {
                if !Self::DEC_ORDERS.contains(&order) {
                    return Err(Error::param(format!("deferred correction order must be in 1..=5, got {order}")));
                }
            }
            _ => {}
        }
        Ok(())
    }
}

impl std::fmt::Display for IntegratorId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            IntegratorId::ExplicitEuler => f.write_str("ee"),
            IntegratorId::Ssprk2 => f.write_str("ssprk2"),
            IntegratorId::Ssprk3 => f.write_str("ssprk3"),
            IntegratorId::Rk22 { alpha } => write!(f, "rk22(alpha={alpha})"),
            IntegratorId::Dec { order } => write!(f, "dec{order}"),
            IntegratorId::Mpe => f.write_str("mpe"),
            IntegratorId::Mprk22 { alpha } => write!(f, "mprk22(alpha={alpha})"),
            IntegratorId::Mpssprk3 => f.write_str("mpssprk3"),
            IntegratorId::Mpdec { order } => write!(f, "mpdec{order}"),
        }
    }
}

fn parse_alpha(args: Option<&str>) -> Result<f64> {
    let Some(args) = args else { return Ok(1.0) };
    let value = match args.split_once('=') {
        Some((key, value)) => {
            let key = key.trim();
            if key != "alpha" && key != "α" && key != "a" {
                return Err(Error::Config(format!("unknown integrator parameter '{key}'")));
            }
            value
        }
        None => args,
    };
    value
        .trim()
        .parse::<f64>()
        .map_err(|_| Error::Config(format!("invalid alpha '{}'", value.trim())))
}

fn parse_order(digits: &str, args: Option<&str>) -> Result<usize> {
    let text = if !digits.is_empty() {
        if args.is_some() {
            return Err(Error::Config("order given twice".into()));
        }
        digits
    } else {
        let args = args.ok_or_else(|| Error::Config("deferred correction needs an order".into()))?;
        match args.split_once('=') {
            Some((key, value)) if key.trim() == "order" => value.trim(),
            Some((key, _)) => return Err(Error::Config(format!("unknown integrator parameter '{}'", key.trim()))),
            None => args.trim(),
        }
    };
    text.parse::<usize>().map_err(|_| Error::Config(format!("invalid order '{text}'")))
}

impl std::str::FromStr for IntegratorId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (name, args) = match s.find('(') {
            Some(open) => {
                let rest = &s[open + 1..];
                let inner = rest
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Config(format!("unbalanced parentheses in '{s}'")))?;
                if inner.contains('(') || inner.contains(')') {
                    return Err(Error::Config(format!("unbalanced parentheses in '{s}'")));
                }
                (s[..open].trim(), Some(inner.trim()))
            }
            None => (s, None),
        };
        let name = name.to_ascii_lowercase();
        let no_args = |id: IntegratorId| match args {
            None => Ok(id),
            Some(_) => Err(Error::Config(format!("'{name}' takes no parameters"))),
        };
        let id = match name.as_str() {
            "ee" => no_args(IntegratorId::ExplicitEuler)?,
            "ssprk2" => no_args(IntegratorId::Ssprk2)?,
            "ssprk3" => no_args(IntegratorId::Ssprk3)?,
            "mpe" => no_args(IntegratorId::Mpe)?,
            "mpssprk3" => no_args(IntegratorId::Mpssprk3)?,
            "mprk22" => IntegratorId::Mprk22 { alpha: parse_alpha(args)? },
            "rk22" => IntegratorId::Rk22 { alpha: parse_alpha(args)? },
            other => {
                if let Some(digits) = other.strip_prefix("mpdec") {
                    IntegratorId::Mpdec { order: parse_order(digits, args)? }
                } else if let Some(digits) = other.strip_prefix("dec") {
                    IntegratorId::Dec { order: parse_order(digits, args)? }
                } else {
                    return Err(Error::Config(format!("unknown integrator '{s}'")));
                }
            }
        };
        id.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(id)
    }
}

impl Serialize for IntegratorId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IntegratorId {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
