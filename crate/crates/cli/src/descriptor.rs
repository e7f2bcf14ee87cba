//! Algebra descriptor DSL.
//!
//! Grammar:
//!   algebra := "mat" "(" INT ")"
//!            | "prod" "(" algebra ("," algebra)+ ")"
//!            | "cyclic" "(" INT ")"
//!            | "stage" "(" group "," INT ")"
//!   group   := "su" INT | "so" INT | "sp" INT     (so INT odd, >= 3)
//!
//! Whitespace is permitted between tokens; the canonical printing carries
//! none, and printing then reparsing is the identity.

use ncchern_core::algebra::{AlgebraError, StructureAlgebra};
use ncchern_core::lie::GroupDescriptor;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DescriptorError {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("range error at byte {pos}: {msg}")]
    Range { pos: usize, msg: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Descriptor {
    Mat(u32),
    Cyclic(u32),
    Prod(Vec<Descriptor>),
    Stage(GroupToken, u32),
}

/// A group name as written in the DSL: `su N`, `so N` (N odd), `sp N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupToken {
    Su(u32),
    So(u32),
    Sp(u32),
}

impl GroupToken {
    /// Parses a bare token like `su2` with range checks.
    pub fn parse(text: &str) -> Result<GroupToken, DescriptorError> {
        let mut p = Parser::new(text);
        let g = p.group()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(DescriptorError::Parse {
                pos: p.pos,
                msg: "trailing input after group".into(),
            });
        }
        Ok(g)
    }

    pub fn to_group(&self) -> GroupDescriptor {
        match self {
            // su N = SU(n+1) with parameter n = N - 1
            GroupToken::Su(n) => GroupDescriptor::su(*n as usize - 1).expect("range-checked"),
            // so N = SO(2n+1) with parameter n = (N - 1) / 2
            GroupToken::So(n) => {
                GroupDescriptor::so_odd((*n as usize - 1) / 2).expect("range-checked")
            }
            GroupToken::Sp(n) => GroupDescriptor::sp(*n as usize).expect("range-checked"),
        }
    }
}

impl std::fmt::Display for GroupToken {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            GroupToken::Su(n) => write!(f, "su{n}"),
            GroupToken::So(n) => write!(f, "so{n}"),
            GroupToken::Sp(n) => write!(f, "sp{n}"),
        }
    }
}

impl std::fmt::Display for Descriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Descriptor::Mat(n) => write!(f, "mat({n})"),
            Descriptor::Cyclic(n) => write!(f, "cyclic({n})"),
            Descriptor::Prod(fs) => {
                write!(f, "prod(")?;
                for (i, d) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{d}")?;
                }
                write!(f, ")")
            }
            Descriptor::Stage(g, n) => write!(f, "stage({g},{n})"),
        }
    }
}

impl Descriptor {
    pub fn parse(text: &str) -> Result<Descriptor, DescriptorError> {
        let mut p = Parser::new(text);
        let d = p.algebra()?;
        p.skip_ws();
        if p.pos < p.bytes.len() {
            return Err(DescriptorError::Parse {
                pos: p.pos,
                msg: "trailing input after descriptor".into(),
            });
        }
        Ok(d)
    }

    pub fn build(&self) -> Result<StructureAlgebra, AlgebraError> {
        match self {
            Descriptor::Mat(n) => StructureAlgebra::matrix(*n as usize),
            Descriptor::Cyclic(n) => StructureAlgebra::cyclic_group(*n as usize),
            Descriptor::Prod(fs) => {
                let factors: Vec<StructureAlgebra> =
                    fs.iter().map(|d| d.build()).collect::<Result<_, _>>()?;
                StructureAlgebra::product(&factors)
            }
            Descriptor::Stage(g, n) => {
                StructureAlgebra::group_stage(&g.to_group(), *n as usize)
            }
        }
    }
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            bytes: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn parse_err<T>(&self, msg: impl Into<String>) -> Result<T, DescriptorError> {
        Err(DescriptorError::Parse {
            pos: self.pos,
            msg: msg.into(),
        })
    }

    fn range_err<T>(&self, pos: usize, msg: impl Into<String>) -> Result<T, DescriptorError> {
        Err(DescriptorError::Range {
            pos,
            msg: msg.into(),
        })
    }

    fn ident(&mut self) -> Result<(usize, String), DescriptorError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_lowercase() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.parse_err("expected a name");
        }
        Ok((
            start,
            std::str::from_utf8(&self.bytes[start..self.pos])
                .expect("ascii")
                .to_string(),
        ))
    }

    fn expect(&mut self, ch: u8) -> Result<(), DescriptorError> {
        self.skip_ws();
        if self.pos < self.bytes.len() && self.bytes[self.pos] == ch {
            self.pos += 1;
            Ok(())
        } else {
            self.parse_err(format!("expected `{}`", ch as char))
        }
    }

    fn peek_is(&mut self, ch: u8) -> bool {
        self.skip_ws();
        self.pos < self.bytes.len() && self.bytes[self.pos] == ch
    }

    fn integer(&mut self) -> Result<(usize, u32), DescriptorError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == start {
            return self.parse_err("expected an integer");
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii");
        match text.parse::<u32>() {
            Ok(v) => Ok((start, v)),
            Err(_) => self.range_err(start, "integer too large"),
        }
    }

    fn algebra(&mut self) -> Result<Descriptor, DescriptorError> {
        let (at, name) = self.ident()?;
        match name.as_str() {
            "mat" => {
                self.expect(b'(')?;
                let (ipos, n) = self.integer()?;
                self.expect(b')')?;
                if n == 0 {
                    return self.range_err(ipos, "mat size must be >= 1");
                }
                Ok(Descriptor::Mat(n))
            }
            "cyclic" => {
                self.expect(b'(')?;
                let (ipos, n) = self.integer()?;
                self.expect(b')')?;
                if n == 0 {
                    return self.range_err(ipos, "cyclic order must be >= 1");
                }
                Ok(Descriptor::Cyclic(n))
            }
            "prod" => {
                self.expect(b'(')?;
                let mut factors = vec![self.algebra()?];
                self.expect(b',')?;
                factors.push(self.algebra()?);
                while self.peek_is(b',') {
                    self.expect(b',')?;
                    factors.push(self.algebra()?);
                }
                self.expect(b')')?;
                Ok(Descriptor::Prod(factors))
            }
            "stage" => {
                self.expect(b'(')?;
                let g = self.group()?;
                self.expect(b',')?;
                let (ipos, n) = self.integer()?;
                self.expect(b')')?;
                if n == 0 {
                    return self.range_err(ipos, "stage count must be >= 1");
                }
                Ok(Descriptor::Stage(g, n))
            }
            other => Err(DescriptorError::Parse {
                pos: at,
                msg: format!("unknown constructor `{other}`"),
            }),
        }
    }

    fn group(&mut self) -> Result<GroupToken, DescriptorError> {
        let (at, name) = self.ident()?;
        let (ipos, n) = self.integer()?;
        match name.as_str() {
            "su" => {
                if n < 2 {
                    self.range_err(ipos, "su requires parameter >= 2")
                } else {
                    Ok(GroupToken::Su(n))
                }
            }
            "so" => {
                if n < 3 || n % 2 == 0 {
                    self.range_err(ipos, "so requires an odd parameter >= 3")
                } else {
                    Ok(GroupToken::So(n))
                }
            }
            "sp" => {
                if n < 1 {
                    self.range_err(ipos, "sp requires parameter >= 1")
                } else {
                    Ok(GroupToken::Sp(n))
                }
            }
            other => Err(DescriptorError::Parse {
                pos: at,
                msg: format!("unknown group family `{other}`"),
            }),
        }
    }
}
