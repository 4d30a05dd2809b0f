//! Operator expressions.
//!
//! Atoms: `id`, `zero`, `lap`, `gamma(s,j)`, `vartheta(s,j)`, `xi(s,j)`,
//! `upsilon(s,j)`, `D(s,j)`, `T(s,j)`, `M(s,j)`, `x(j)`, `nabla(j)`,
//! `nablat(j)` with `s` one of `+`/`-` and one-based axes, plus the Dirac
//! family by name (`dz`, `dzdag`, `dX`, `dXbar`, `z`, `zdag`, `X`, `Xbar`,
//! `Ez`, `Ezdag`, `beta`, `Gz`, `Gzdag`, `EX`, `GX`, `GXbar`, `dplus`,
//! `dminus`). Combinators: `compose(a,b,…)`, `add(a,b,…)`, `scale(c,a)`,
//! `comm(a,b)`, `acomm(a,b)`.

use latclif_core::dirac::DiracFamily;
use latclif_core::endo::{anticommutator, commutator, Operator};
use latclif_core::{LatticeStep, Scalar, Sign};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
#[error("{0}")]
pub struct ExprError(pub String);

fn err<T>(msg: impl Into<String>) -> Result<T, ExprError> {
    Err(ExprError(msg.into()))
}

/// Split `name(args)` into the name and its top-level comma separated
/// arguments; a bare atom has no argument list.
fn split_call(s: &str) -> Result<(&str, Vec<&str>), ExprError> {
    let s = s.trim();
    let Some(open) = s.find('(') else {
        return Ok((s, Vec::new()));
    };
    if !s.ends_with(')') {
        return err(format!("unbalanced parentheses in `{s}`"));
    }
    let name = s[..open].trim();
    let body = &s[open + 1..s.len() - 1];
    let mut args = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, c) in body.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return err(format!("unbalanced parentheses in `{s}`"));
                }
            }
            ',' if depth == 0 => {
                args.push(body[start..i].trim());
                start = i + 1;
            }
            _ => {}
        }
    }
    if depth != 0 {
        return err(format!("unbalanced parentheses in `{s}`"));
    }
    args.push(body[start..].trim());
    Ok((name, args))
}

pub struct Parser<'a> {
    pub family: &'a DiracFamily,
}

impl Parser<'_> {
    fn n(&self) -> usize {
        self.family.n
    }

    fn axis(&self, s: &str) -> Result<usize, ExprError> {
        match s.parse::<usize>() {
            Ok(j) if (1..=self.n()).contains(&j) => Ok(j - 1),
            _ => err(format!("axis `{s}` not in 1..={}", self.n())),
        }
    }

    fn step(&self, name: &str, args: &[&str]) -> Result<LatticeStep, ExprError> {
        let [s, j] = args else {
            return err(format!("`{name}` takes (sign, axis)"));
        };
        let sign = match *s {
            "+" => Sign::Plus,
            "-" => Sign::Minus,
            _ => return err(format!("sign `{s}` is not + or -")),
        };
        Ok(LatticeStep::new(self.axis(j)?, sign))
    }

    fn at_least(name: &str, args: &[&str], k: usize) -> Result<(), ExprError> {
        if args.len() < k {
            return err(format!("`{name}` needs at least {k} arguments"));
        }
        Ok(())
    }

    pub fn parse(&self, text: &str) -> Result<Operator, ExprError> {
        let (name, args) = split_call(text)?;
        if name.is_empty() {
            return err("empty expression");
        }
        let sub = |a: &&str| self.parse(a);
        let op = match (name, args.len()) {
            ("id", 0) => Operator::identity(),
            ("zero", 0) => Operator::zero(),
            ("lap", 0) => Operator::laplacian(),
            ("gamma", _) => Operator::gamma(self.step(name, &args)?),
            ("vartheta", _) => Operator::vartheta(self.step(name, &args)?),
            ("xi", _) => Operator::xi(self.step(name, &args)?),
            ("upsilon", _) => {
                let s = self.step(name, &args)?;
                Operator::upsilon(s.sign, s.axis)
            }
            ("D", _) => Operator::diff(self.step(name, &args)?),
            ("T", _) => Operator::shift(self.step(name, &args)?),
            ("M", _) => Operator::coord_shift(self.step(name, &args)?),
            ("x", 1) => Operator::coord(self.axis(args[0])?),
            ("nabla", 1) => Operator::sym_diff(self.axis(args[0])?),
            ("nablat", 1) => Operator::skew_diff(self.axis(args[0])?),
            ("compose", _) => {
                Self::at_least(name, &args, 2)?;
                let ops = args.iter().map(sub).collect::<Result<Vec<_>, _>>()?;
                let mut it = ops.into_iter().rev();
                let mut acc = it.next().unwrap();
                for o in it {
                    acc = o.then_after(&acc);
                }
                acc
            }
            ("add", _) => {
                Self::at_least(name, &args, 2)?;
                Operator::sum(args.iter().map(sub).collect::<Result<_, _>>()?)
            }
            ("scale", 2) => {
                let c: Scalar = args[0]
                    .parse()
                    .or_else(|_| match args[0] {
                        "i" => Ok(Scalar::i()),
                        "-i" => Ok(-Scalar::i()),
                        _ => Err(()),
                    })
                    .map_err(|_| ExprError(format!("bad scalar `{}`", args[0])))?;
                self.parse(args[1])?.scaled(c)
            }
            ("comm", 2) => commutator(&self.parse(args[0])?, &self.parse(args[1])?),
            ("acomm", 2) => anticommutator(&self.parse(args[0])?, &self.parse(args[1])?),
            (n, 0) => match self.family.member(n) {
                Some(op) => op.clone(),
                None => return err(format!("unknown operator `{n}`")),
            },
            (n, k) => return err(format!("`{n}` does not take {k} arguments")),
        };
        Ok(op)
    }
}
