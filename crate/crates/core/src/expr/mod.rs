//! One-variable expressions: parsing, printing, and jet evaluation.

mod ast;
mod parse;

pub use ast::{BinOp, Constant, Expr, Func};
pub use parse::parse;

use crate::error::{Error, Result};
use crate::jet::{Jet3, Taylor3};

impl std::str::FromStr for Expr {
    type Err = Error;

    fn from_str(s: &str) -> Result<Expr> {
        parse(s)
    }
}

impl Expr {
    /// Value and first three derivatives at `x`.
    pub fn eval_jet3(&self, x: f64) -> Result<Jet3> {
        Ok(self.taylor(x)?.into())
    }

    /// Value at `x`. Fails exactly when [`Expr::eval_jet3`] fails.
    pub fn eval(&self, x: f64) -> Result<f64> {
        Ok(self.eval_jet3(x)?.d0)
    }

    fn taylor(&self, x: f64) -> Result<Taylor3> {
        let out = match self {
            Expr::Num(v) => Taylor3::constant(*v),
            Expr::Const(c) => Taylor3::constant(c.value()),
            Expr::Var => Taylor3::variable(x),
            Expr::Neg(e) => -e.taylor(x)?,
            Expr::Call(func, arg) => {
                let a = arg.taylor(x)?;
                match func {
                    Func::Exp => a.exp(),
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Log => {
                        self.require(a.value() > 0.0, x)?;
                        a.ln()
                    }
                    Func::Sqrt => {
                        self.require(a.value() > 0.0, x)?;
                        a.sqrt()
                    }
                }
            }
            Expr::Binary(op, lhs, rhs) => {
                let l = lhs.taylor(x)?;
                let r = rhs.taylor(x)?;
                match op {
                    BinOp::Add => l + r,
                    BinOp::Sub => l - r,
                    BinOp::Mul => l * r,
                    BinOp::Div => {
                        self.require(r.value() != 0.0, x)?;
                        l.div(&r)
                    }
                    BinOp::Pow => self.pow(l, r, x)?,
                }
            }
        };
        self.require(out.is_finite(), x)?;
        Ok(out)
    }

    fn pow(&self, base: Taylor3, exponent: Taylor3, x: f64) -> Result<Taylor3> {
        if exponent.is_constant() {
            let p = exponent.value();
            let integral = p.fract() == 0.0;
            self.require(base.value() > 0.0 || integral, x)?;
            return Ok(base.powf(p));
        }
        // Variable exponent: b^v = exp(v ln b).
        self.require(base.value() > 0.0, x)?;
        Ok((exponent * base.ln()).exp())
    }

    fn require(&self, ok: bool, x: f64) -> Result<()> {
        if ok {
            Ok(())
        } else {
            Err(Error::domain(self.to_string(), x))
        }
    }
}
