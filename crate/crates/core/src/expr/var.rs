use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

const NAME_CAP: usize = 15;

/// Short identifier stored inline so that variables stay `Copy`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Name {
    len: u8,
    bytes: [u8; NAME_CAP],
}

impl Name {
    pub fn new(s: &str) -> Result<Self> {
        let valid = !s.is_empty()
            && s.len() <= NAME_CAP
            && s.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(Error::InvalidArgument(format!(
                "`{s}` is not an identifier of at most {NAME_CAP} ASCII characters"
            )));
        }
        let mut bytes = [0u8; NAME_CAP];
        bytes[..s.len()].copy_from_slice(s.as_bytes());
        Ok(Name { len: s.len() as u8, bytes })
    }

    pub fn as_str(&self) -> &str {
        // only ASCII is ever stored
        std::str::from_utf8(&self.bytes[..self.len as usize]).unwrap_or("")
    }
}

impl Ord for Name {
    fn cmp(&self, other: &Self) -> Ordering {
        // zero padding sorts before every identifier byte, so this is string order
        self.bytes.cmp(&other.bytes)
    }
}

impl PartialOrd for Name {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.as_str())
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A coordinate of the jet space, a differential atom, or a symbolic parameter.
///
/// The derived ordering is the fixed variable order used everywhere:
/// `x < u1 < u1_1 < … < u2 < … < atoms < parameters`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarId {
    Independent,
    /// `Jet { dep: i, order: k }` is `u^i_k`; order 0 is the dependent variable itself.
    Jet { dep: u16, order: u16 },
    Atom(Name),
    Parameter(Name),
}

impl VarId {
    pub fn jet(dep: usize, order: usize) -> VarId {
        assert!(dep >= 1, "dependent variables are numbered from 1");
        VarId::Jet { dep: dep as u16, order: order as u16 }
    }

    pub fn atom(name: &str) -> Result<VarId> {
        Name::new(name).map(VarId::Atom)
    }

    pub fn param(name: &str) -> Result<VarId> {
        Name::new(name).map(VarId::Parameter)
    }

    /// Jet order of the variable; `x` counts as order 0, atoms and parameters as `None`.
    pub fn jet_order(&self) -> Option<usize> {
        match self {
            VarId::Independent => Some(0),
            VarId::Jet { order, .. } => Some(*order as usize),
            _ => None,
        }
    }

    pub fn is_parameter(&self) -> bool {
        matches!(self, VarId::Parameter(_))
    }

    pub fn is_atom(&self) -> bool {
        matches!(self, VarId::Atom(_))
    }

    /// True for `x` and every `u^i_k`.
    pub fn is_base(&self) -> bool {
        matches!(self, VarId::Independent | VarId::Jet { .. })
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::Independent => f.write_str("x"),
            VarId::Jet { dep, order: 0 } => write!(f, "u{dep}"),
            VarId::Jet { dep, order } => write!(f, "u{dep}_{order}"),
            VarId::Atom(n) | VarId::Parameter(n) => write!(f, "{n}"),
        }
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_variable_order() {
        let k = VarId::param("K").unwrap();
        let w = VarId::atom("w").unwrap();
        let order = [
            VarId::Independent,
            VarId::jet(1, 0),
            VarId::jet(1, 1),
            VarId::jet(1, 7),
            VarId::jet(2, 0),
            w,
            k,
        ];
        for pair in order.windows(2) {
            assert!(pair[0] < pair[1], "{:?} < {:?}", pair[0], pair[1]);
        }
    }

    #[test]
    fn names_are_validated() {
        assert!(Name::new("alpha").is_ok());
        assert!(Name::new("1abc").is_err());
        assert!(Name::new("a_very_long_identifier").is_err());
        assert_eq!(VarId::jet(2, 3).to_string(), "u2_3");
        assert_eq!(VarId::jet(1, 0).to_string(), "u1");
    }
}
