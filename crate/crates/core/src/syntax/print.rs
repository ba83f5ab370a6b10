use std::fmt;

use super::Formula;

/// Binary connectives are always parenthesised, negation always wraps its
/// operand, and a quantifier is parenthesised only when it would otherwise
/// swallow the right operand of an enclosing connective.
pub(super) fn write_formula(out: &mut fmt::Formatter<'_>, f: &Formula) -> fmt::Result {
    match f {
        Formula::Atom(a, args) => {
            write!(out, "{a}")?;
            for x in args {
                write!(out, " {x}")?;
            }
            Ok(())
        }
        Formula::EqInd(x, y) => write!(out, "{x} = {y}"),
        Formula::EqPred(a, b) => write!(out, "{a} = {b}"),
        Formula::Not(g) => {
            out.write_str("~(")?;
            write_formula(out, g)?;
            out.write_str(")")
        }
        Formula::Bin(c, l, r) => {
            out.write_str("(")?;
            if matches!(**l, Formula::Quant(..)) {
                out.write_str("(")?;
                write_formula(out, l)?;
                out.write_str(")")?;
            } else {
                write_formula(out, l)?;
            }
            write!(out, " {} ", c.symbol())?;
            write_formula(out, r)?;
            out.write_str(")")
        }
        Formula::Quant(q, v, body) => {
            write!(out, "{} {v} . ", q.keyword())?;
            write_formula(out, body)
        }
    }
}
