//! Nested construction expressions, e.g.
//! `blowup(prodcp(builtin:torus:2, k=1), center=builtin:torus:1, codim=2)`.
//!
//! ```text
//! expr   := source | call
//! source := "builtin:" NAME | "file:" PATH
//! call   := "blowup" "(" expr "," "center" "=" expr "," "codim" "=" INT ")"
//!         | "proj"   "(" expr "," "rank" "=" INT ")"
//!         | "prodcp" "(" expr "," "k" "=" INT ")"
//!         | "excdiv" "(" expr "," "codim" "=" INT ")"
//! ```

use std::path::{Path, PathBuf};

use thiserror::Error;

use crate::constructions::{self, ConstructionError};
use crate::diamond::ManifoldModel;
use crate::registry::{self, RegistryError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExprError {
    #[error("parse-error: {0}")]
    Parse(String),
    #[error(transparent)]
    Registry(#[from] RegistryError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Expr {
    Builtin(String),
    File(PathBuf),
    BlowUp {
        ambient: Box<Expr>,
        center: Box<Expr>,
        codim: i64,
    },
    Proj {
        base: Box<Expr>,
        rank: i64,
    },
    ProdCp {
        base: Box<Expr>,
        k: i64,
    },
    ExcDiv {
        center: Box<Expr>,
        codim: i64,
    },
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn error<T>(&self, msg: &str) -> Result<T, ExprError> {
        Err(ExprError::Parse(format!(
            "{msg} at offset {} in '{}'",
            self.pos, self.src
        )))
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, token: &str) -> Result<(), ExprError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.error(&format!("expected '{token}'"))
        }
    }

    /// Text up to the next `,` or `)` at nesting depth zero.
    fn atom(&mut self) -> &'a str {
        self.skip_ws();
        let rest = self.rest();
        let end = rest.find([',', ')']).unwrap_or(rest.len());
        self.pos += end;
        rest[..end].trim_end()
    }

    fn integer(&mut self, key: &str) -> Result<i64, ExprError> {
        self.expect(key)?;
        self.expect("=")?;
        let text = self.atom();
        text.parse::<i64>()
            .or_else(|_| self.error(&format!("'{text}' is not an integer")))
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        self.skip_ws();
        if self.eat("builtin:") {
            let name = self.atom();
            if name.is_empty() {
                return self.error("empty builtin name");
            }
            return Ok(Expr::Builtin(name.to_string()));
        }
        if self.eat("file:") {
            let path = self.atom();
            if path.is_empty() {
                return self.error("empty file path");
            }
            return Ok(Expr::File(PathBuf::from(path)));
        }
        let ident_len = self
            .rest()
            .find(|c: char| !c.is_ascii_alphanumeric())
            .unwrap_or(self.rest().len());
        let ident = &self.rest()[..ident_len];
        self.pos += ident_len;
        let parsed = match ident {
            "blowup" => {
                self.expect("(")?;
                let ambient = Box::new(self.expr()?);
                self.expect(",")?;
                self.expect("center")?;
                self.expect("=")?;
                let center = Box::new(self.expr()?);
                self.expect(",")?;
                let codim = self.integer("codim")?;
                Expr::BlowUp {
                    ambient,
                    center,
                    codim,
                }
            }
            "proj" | "prodcp" | "excdiv" => {
                self.expect("(")?;
                let inner = Box::new(self.expr()?);
                self.expect(",")?;
                match ident {
                    "proj" => Expr::Proj {
                        base: inner,
                        rank: self.integer("rank")?,
                    },
                    "prodcp" => Expr::ProdCp {
                        base: inner,
                        k: self.integer("k")?,
                    },
                    _ => Expr::ExcDiv {
                        center: inner,
                        codim: self.integer("codim")?,
                    },
                }
            }
            "" => return self.error("expected a model source or construction"),
            other => return self.error(&format!("unknown construction '{other}'")),
        };
        self.expect(")")?;
        Ok(parsed)
    }
}

pub fn parse(src: &str) -> Result<Expr, ExprError> {
    let mut p = Parser { src, pos: 0 };
    let e = p.expr()?;
    p.skip_ws();
    if !p.rest().is_empty() {
        return p.error("trailing input");
    }
    Ok(e)
}

/// Evaluates an expression. Relative `file:` paths resolve against `base_dir`; `strict`
/// additionally requires connected blow-up centers.
pub fn evaluate(e: &Expr, base_dir: &Path, strict: bool) -> Result<ManifoldModel, ExprError> {
    Ok(match e {
        Expr::Builtin(name) => registry::builtin_model(name)?,
        Expr::File(path) => registry::load_model_file(&base_dir.join(path))?,
        Expr::BlowUp {
            ambient,
            center,
            codim,
        } => {
            let x = evaluate(ambient, base_dir, strict)?;
            let y = evaluate(center, base_dir, strict)?;
            if strict {
                constructions::blow_up_strict(&x, &y, *codim)?
            } else {
                constructions::blow_up(&x, &y, *codim)?
            }
        }
        Expr::Proj { base, rank } => {
            constructions::projectivize(&evaluate(base, base_dir, strict)?, *rank)?
        }
        Expr::ProdCp { base, k } => {
            constructions::product_with_cpk(&evaluate(base, base_dir, strict)?, *k)?
        }
        Expr::ExcDiv { center, codim } => {
            constructions::exceptional_divisor(&evaluate(center, base_dir, strict)?, *codim)?
        }
    })
}

/// Parses and evaluates in one go.
pub fn construct(src: &str, base_dir: &Path, strict: bool) -> Result<ManifoldModel, ExprError> {
    evaluate(&parse(src)?, base_dir, strict)
}
