//! The set-literal grammar: comma-separated integers for `F_p`, `num/den`
//! tokens for rationals, `x:y:z` points and `a:b:c:d` planes. Formatting is
//! the inverse of parsing.

use num_rational::BigRational;
use sumprod_core::field::Prime;
use sumprod_core::incidence::{Plane, Point3};
use sumprod_core::rational::{parse_rational, RationalSet};
use sumprod_core::sets::ResidueSet;

use crate::{CliError, CliResult};

fn tokens(s: &str) -> impl Iterator<Item = &str> {
    s.split(',').map(str::trim).filter(|t| !t.is_empty())
}

pub fn parse_prime(field: &str, value: u64) -> CliResult<Prime> {
    Prime::new(value).map_err(|_| CliError::malformed(field, format!("{value} is not prime")))
}

/// Integers, reduced mod `p`; negative values are allowed.
pub fn parse_residues(field: &str, s: &str, p: Prime) -> CliResult<ResidueSet> {
    let values = tokens(s)
        .map(|t| t.parse::<i128>().map_err(|_| CliError::malformed(field, format!("`{t}` is not an integer"))))
        .collect::<CliResult<Vec<_>>>()?;
    Ok(ResidueSet::from_integers(p, values))
}

pub fn parse_rationals(field: &str, s: &str) -> CliResult<RationalSet> {
    let values = tokens(s)
        .map(|t| parse_rational(t).ok_or_else(|| CliError::malformed(field, format!("`{t}` is not a rational"))))
        .collect::<CliResult<Vec<BigRational>>>()?;
    Ok(RationalSet::new(values))
}

fn parse_tuple<const N: usize>(field: &str, t: &str) -> CliResult<[u64; N]> {
    let parts: Vec<&str> = t.split(':').map(str::trim).collect();
    if parts.len() != N {
        return Err(CliError::malformed(field, format!("`{t}` should have {N} coordinates")));
    }
    let mut out = [0u64; N];
    for (o, part) in out.iter_mut().zip(parts) {
        *o = part.parse().map_err(|_| CliError::malformed(field, format!("`{part}` is not a residue")))?;
    }
    Ok(out)
}

pub fn parse_points(field: &str, s: &str) -> CliResult<Vec<Point3>> {
    tokens(s).map(|t| parse_tuple::<3>(field, t)).collect()
}

pub fn parse_planes(field: &str, s: &str) -> CliResult<Vec<Plane>> {
    tokens(s).map(|t| parse_tuple::<4>(field, t)).collect()
}

pub fn format_residues(s: &ResidueSet) -> String {
    s.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn format_rationals(s: &RationalSet) -> String {
    s.members().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips() {
        let p = parse_prime("p", 13).unwrap();
        let s = parse_residues("set", " 12, -1,5,0,27", p).unwrap();
        assert_eq!(format_residues(&s), "0,1,5,12");
        assert_eq!(parse_residues("set", &format_residues(&s), p).unwrap(), s);

        let r = parse_rationals("set", "1/2, 3, -4/6").unwrap();
        assert_eq!(format_rationals(&r), "-2/3,1/2,3");
        assert_eq!(parse_rationals("set", &format_rationals(&r)).unwrap(), r);

        assert_eq!(parse_residues("set", "", p).unwrap().len(), 0);
    }

    #[test]
    fn diagnostics_name_the_field() {
        let p = parse_prime("p", 7).unwrap();
        let e = parse_residues("--set", "1,x", p).unwrap_err();
        assert!(e.to_string().contains("--set"));
        assert!(parse_prime("--p", 8).unwrap_err().to_string().contains("--p"));
        assert!(parse_points("--points", "1:2").is_err());
        assert_eq!(parse_planes("--planes", "1:0:0:3").unwrap(), vec![[1, 0, 0, 3]]);
    }
}
