//! Higher-order logic rendering of normal terms.

use super::term::LambdaTerm;

/// Renders a beta-normal term as a logical formula: `forall x.[A => B]`,
/// `A & B`, `A | B`, and `p(x,y)` for `((p y) x)`.
pub fn print_hol(t: &LambdaTerm) -> String {
    let mut out = String::new();
    write_hol(t, &mut out, false);
    out
}

fn spine(t: &LambdaTerm) -> (&LambdaTerm, Vec<&LambdaTerm>) {
    let mut args = Vec::new();
    let mut head = t;
    while let LambdaTerm::App(f, a) = head {
        args.push(a.as_ref());
        head = f;
    }
    // args are collected outermost first, which is the reversed application order
    (head, args)
}

fn binary_op(name: &str) -> Option<&'static str> {
    match name {
        "implies" => Some("=>"),
        "and" => Some("&"),
        "or" => Some("|"),
        _ => None,
    }
}

fn write_hol(t: &LambdaTerm, out: &mut String, operand: bool) {
    let (head, args) = spine(t);
    if let LambdaTerm::Const(c, _) = head {
        if let (Some(op), [rhs, lhs]) = (binary_op(c), args.as_slice()) {
            if operand {
                out.push('(');
            }
            write_hol(lhs, out, true);
            out.push_str(&format!(" {op} "));
            write_hol(rhs, out, true);
            if operand {
                out.push(')');
            }
            return;
        }
        if let ("forall" | "exists", [LambdaTerm::Abs(x, _, body)]) = (c.as_str(), args.as_slice()) {
            out.push_str(&format!("{c} {x}.["));
            write_hol(body, out, false);
            out.push(']');
            return;
        }
    }
    match t {
        LambdaTerm::Var(x) | LambdaTerm::Const(x, _) => out.push_str(x),
        LambdaTerm::Abs(x, _, body) => {
            out.push_str(&format!("lambda {x}.["));
            write_hol(body, out, false);
            out.push(']');
        }
        LambdaTerm::Pair(a, b) => {
            out.push('<');
            write_hol(a, out, false);
            out.push_str(", ");
            write_hol(b, out, false);
            out.push('>');
        }
        LambdaTerm::Fst(p) | LambdaTerm::Snd(p) => {
            out.push_str(if matches!(t, LambdaTerm::Fst(_)) { "fst(" } else { "snd(" });
            write_hol(p, out, false);
            out.push(')');
        }
        LambdaTerm::App(..) => {
            if matches!(head, LambdaTerm::Var(_) | LambdaTerm::Const(..)) {
                write_hol(head, out, false);
            } else {
                out.push('(');
                write_hol(head, out, false);
                out.push(')');
            }
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_hol(a, out, false);
            }
            out.push(')');
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::SemType;

    fn c(name: &str) -> LambdaTerm {
        LambdaTerm::constant(name, SemType::E)
    }

    #[test]
    fn predicate_argument_order() {
        let x = LambdaTerm::var("x");
        let y = LambdaTerm::var("y");
        assert_eq!(print_hol(&LambdaTerm::app(c("student"), x.clone())), "student(x)");
        let t = LambdaTerm::app(LambdaTerm::app(c("ace"), y), x);
        assert_eq!(print_hol(&t), "ace(x,y)");
    }

    #[test]
    fn nested_connectives_are_bracketed() {
        let p = LambdaTerm::var("p");
        let q = LambdaTerm::var("q");
        let and = LambdaTerm::app(LambdaTerm::app(c("and"), p.clone()), q.clone());
        let imp = LambdaTerm::app(LambdaTerm::app(c("implies"), and), q);
        assert_eq!(print_hol(&imp), "(p & q) => q");
    }
}
