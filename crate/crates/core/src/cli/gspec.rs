//! Textual function specifications used by `--g` and `--target`.

use std::path::Path;

use crate::error::{Error, Result};
use crate::function::{Builtin, PeriodicSamples, RealFunction};
use crate::interp::read_xy_csv;

pub const CATALOG: &str =
    "cospi, cos2pik:<k>, sin2pik:<k>, step:<c>:<h>, saw, const:<v>, xm05, csv:<path>";

fn num<T: std::str::FromStr>(spec: &str, s: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Input(format!("function spec '{spec}': cannot parse '{s}'")))
}

/// Parse one of [`CATALOG`].
pub fn parse(spec: &str) -> Result<RealFunction> {
    let parts: Vec<&str> = spec.splitn(3, ':').collect();
    let b = match parts.as_slice() {
        ["cospi"] => Builtin::CosPi,
        ["saw"] => Builtin::Saw,
        ["xm05"] => Builtin::XMinusHalf,
        ["cos2pik", k] => Builtin::Cos2PiK(num(spec, k)?),
        ["sin2pik", k] => Builtin::Sin2PiK(num(spec, k)?),
        ["const", v] => Builtin::Const(num(spec, v)?),
        ["step", c, h] => Builtin::Step {
            c: num(spec, c)?,
            h: num(spec, h)?,
        },
        ["csv", ..] => {
            let path = &spec["csv:".len()..];
            let points = read_xy_csv(Path::new(path))?;
            return Ok(RealFunction::sampled(PeriodicSamples::new(&points)?));
        }
        _ => {
            return Err(Error::Input(format!(
                "unknown function spec '{spec}'; expected one of {CATALOG}"
            )))
        }
    };
    Ok(b.into())
}
