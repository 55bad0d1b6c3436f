//! Expression language for user-defined `f(x, y)`, `u(x)` and `v(y)`.
//!
//! Grammar, from loosest to tightest binding:
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary (('*' | '/') unary)*
//! unary   := '-' unary | power
//! power   := primary ('^' unary)?
//! primary := number | 'x' | 'y' | 't' | func '(' expr ')' | '(' expr ')'
//! func    := sin | cos | exp | ln | sqrt | asinh
//! ```
//!
//! Derivatives are exact: evaluation is generic over [`Scalar`], and the
//! jet types [`Jet2`] and [`CurveJet`] implement forward-mode arithmetic.

mod parse;
mod scalar;

pub use parse::{parse, BinOp, Expr, Func, ParseError, Var};
pub use scalar::{CurveJet, Jet2, Scalar};

use crate::error::{Error, Result};

impl Expr {
    /// Evaluate with `bind` supplying the value of each variable.
    pub fn eval_with<S: Scalar>(&self, bind: &dyn Fn(Var) -> Result<S>) -> Result<S> {
        let out = match self {
            Expr::Num(v) => S::constant(*v),
            Expr::Var(v) => bind(*v)?,
            Expr::Neg(e) => -e.eval_with(bind)?,
            Expr::Binary(op, l, r) => {
                let a = l.eval_with(bind)?;
                match op {
                    BinOp::Add => a + r.eval_with(bind)?,
                    BinOp::Sub => a - r.eval_with(bind)?,
                    BinOp::Mul => a * r.eval_with(bind)?,
                    BinOp::Div => {
                        let b = r.eval_with(bind)?;
                        if b.value() == 0.0 {
                            return Err(Error::DivisionByZero);
                        }
                        a.div(b)
                    }
                    BinOp::Pow => pow(a, r, bind)?,
                }
            }
            Expr::Call(func, e) => {
                let a = e.eval_with(bind)?;
                let t = a.value();
                match func {
                    Func::Sin => a.sin(),
                    Func::Cos => a.cos(),
                    Func::Exp => a.exp(),
                    Func::Asinh => a.asinh(),
                    Func::Ln => {
                        if t <= 0.0 {
                            return Err(Error::domain(format!("ln of non-positive value {t}")));
                        }
                        a.ln()
                    }
                    Func::Sqrt => {
                        if t < 0.0 {
                            return Err(Error::domain(format!("sqrt of negative value {t}")));
                        }
                        a.sqrt()
                    }
                }
            }
        };
        if out.all_finite() {
            Ok(out)
        } else {
            Err(Error::NonFinite(format!("while evaluating `{self}`")))
        }
    }

    /// Plain value at `(x, y)`; `t` is rejected.
    pub fn eval(&self, x: f64, y: f64) -> Result<f64> {
        self.eval_with(&|v| surface_var(v, x, y))
    }
}

fn surface_var<S: Scalar>(v: Var, x: S, y: S) -> Result<S> {
    match v {
        Var::X => Ok(x),
        Var::Y => Ok(y),
        Var::T => Err(Error::domain("variable `t` is not allowed in a surface expression")),
    }
}

fn pow<S: Scalar>(base: S, exponent: &Expr, bind: &dyn Fn(Var) -> Result<S>) -> Result<S> {
    let a = base.value();
    if exponent.is_constant() {
        let n = exponent.eval_with::<f64>(&|_| unreachable!("constant exponent"))?;
        if n.fract() == 0.0 {
            if a == 0.0 && n < 0.0 {
                return Err(Error::DivisionByZero);
            }
            return Ok(base.powf(n));
        }
        if a <= 0.0 {
            return Err(Error::domain(format!(
                "non-integer power {n} of non-positive base {a}"
            )));
        }
        return Ok(base.powf(n));
    }
    if a <= 0.0 {
        return Err(Error::domain(format!("variable power of non-positive base {a}")));
    }
    let b = exponent.eval_with(bind)?;
    Ok((b * base.ln()).exp())
}

/// Value and partials up to order two of a surface expression at `(x, y)`.
pub fn jet2_at(e: &Expr, x: f64, y: f64) -> Result<Jet2> {
    e.eval_with(&|v| surface_var(v, Jet2::var_x(x), Jet2::var_y(y)))
}

/// Value and first three derivatives of a one-variable expression at `t`.
///
/// Whichever single variable the expression uses (`x`, `y` or `t`) is bound
/// to `t`; expressions with two distinct variables are rejected.
pub fn jet3_curve_at(e: &Expr, t: f64) -> Result<CurveJet> {
    let vars = e.variables();
    if vars.len() > 1 {
        return Err(Error::domain(format!(
            "curve expression uses {} variables, expected one",
            vars.len()
        )));
    }
    e.eval_with(&|_| Ok(CurveJet::var(t)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn evaluates_with_precedence() {
        let e = parse("x^2 + sin(y)").unwrap();
        assert_eq!(e.eval(3.0, 0.0).unwrap(), 9.0);
        assert_eq!(parse("-2^2").unwrap().eval(0.0, 0.0).unwrap(), -4.0);
        assert_eq!(parse("2*3-4/2").unwrap().eval(0.0, 0.0).unwrap(), 4.0);
    }

    #[test]
    fn jet_of_product() {
        let j = jet2_at(&parse("x*y").unwrap(), 2.0, 5.0).unwrap();
        assert_eq!(j, Jet2::new(10.0, 5.0, 2.0, 0.0, 1.0, 0.0));
    }

    #[test]
    fn jet_of_square() {
        let j = jet2_at(&parse("x^2").unwrap(), 3.0, 0.0).unwrap();
        assert_eq!((j.fx, j.fxx), (6.0, 2.0));
    }

    #[test]
    fn log_asinh_form_has_unit_slope_at_origin() {
        let j = jet2_at(&parse("ln(y+sqrt(1+y^2))").unwrap(), 0.0, 0.0).unwrap();
        assert!((j.fy - 1.0).abs() < 1e-15);
        let a = jet2_at(&parse("asinh(y)").unwrap(), 0.0, 0.3).unwrap();
        let b = jet2_at(&parse("ln(y+sqrt(1+y^2))").unwrap(), 0.0, 0.3).unwrap();
        assert!((a.fyy - b.fyy).abs() < 1e-14);
    }

    #[test]
    fn curve_jets() {
        let j = jet3_curve_at(&parse("t^3").unwrap(), 2.0).unwrap();
        assert_eq!(j, CurveJet::new(8.0, 12.0, 12.0, 6.0));
        let j = jet3_curve_at(&parse("exp(t)").unwrap(), 0.0).unwrap();
        assert_eq!(j, CurveJet::new(1.0, 1.0, 1.0, 1.0));
        assert!(jet3_curve_at(&parse("x*y").unwrap(), 1.0).is_err());
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(parse("ln(x)").unwrap().eval(-1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(parse("ln(x)").unwrap().eval(0.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(parse("sqrt(x)").unwrap().eval(-1.0, 0.0), Err(Error::Domain(_))));
        assert_eq!(parse("1/x").unwrap().eval(0.0, 0.0), Err(Error::DivisionByZero));
        assert!(matches!(parse("x^0.5").unwrap().eval(-1.0, 0.0), Err(Error::Domain(_))));
        assert!(matches!(parse("x^y").unwrap().eval(-1.0, 2.0), Err(Error::Domain(_))));
        assert!(matches!(parse("t").unwrap().eval(1.0, 2.0), Err(Error::Domain(_))));
        // derivative of sqrt blows up at zero
        assert!(matches!(
            jet2_at(&parse("sqrt(x)").unwrap(), 0.0, 0.0),
            Err(Error::NonFinite(_))
        ));
    }

    #[test]
    fn integer_powers_of_negative_bases() {
        assert_eq!(parse("x^3").unwrap().eval(-2.0, 0.0).unwrap(), -8.0);
        assert_eq!(parse("x^-2").unwrap().eval(-2.0, 0.0).unwrap(), 0.25);
        assert_eq!(parse("x^-1").unwrap().eval(0.0, 0.0), Err(Error::DivisionByZero));
        let j = jet2_at(&parse("x^3").unwrap(), -1.0, 0.0).unwrap();
        assert_eq!((j.fx, j.fxx), (3.0, -6.0));
    }

    #[test]
    fn variable_exponent() {
        let j = jet2_at(&parse("x^y").unwrap(), 2.0, 3.0).unwrap();
        assert!((j.f - 8.0).abs() < 1e-12);
        assert!((j.fx - 12.0).abs() < 1e-12);
        assert!((j.fy - 8.0 * 2f64.ln()).abs() < 1e-12);
    }
}
