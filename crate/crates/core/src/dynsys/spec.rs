//! Textual system and set specifications.

use super::{Frac64, System, TargetSet};
use crate::cfrac::{renormalization_interval, Alpha, CircleArc};
use crate::error::{Error, Result};

fn num<T: std::str::FromStr>(s: &str, what: &str) -> Result<T> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("bad {what} `{s}`")))
}

/// `finite:N,r`, `rot:<alpha>` or `doubling`.
pub fn parse_system(spec: &str) -> Result<System> {
    let spec = spec.trim();
    if spec == "doubling" {
        return Ok(System::Doubling);
    }
    match spec.split_once(':') {
        Some(("finite", args)) => {
            let (n, r) = args
                .split_once(',')
                .ok_or_else(|| Error::Parse(format!("expected finite:N,r, got `{spec}`")))?;
            System::finite(num(n, "modulus")?, num(r, "shift")?).map_err(|e| Error::Parse(e.to_string()))
        }
        Some(("rot", alpha)) => Ok(System::rotation(alpha.parse::<Alpha>()?)),
        _ => Err(Error::Parse(format!("unknown system `{spec}`"))),
    }
}

/// `subset:i,j,…`, `arc:a,b`, `dyadic:k,i` or `jn:z,n`; the last needs a
/// rotation to supply α.
pub fn parse_set(spec: &str, system: &System) -> Result<TargetSet> {
    let spec = spec.trim();
    let (head, args) = spec
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("bad set `{spec}`")))?;
    let pair = || -> Result<(&str, &str)> {
        args.split_once(',')
            .ok_or_else(|| Error::Parse(format!("expected two arguments in `{spec}`")))
    };
    let set = match head {
        "subset" => {
            let System::FiniteRotation { modulus, .. } = system else {
                return Err(Error::Parse(format!("`{spec}` needs a finite system")));
            };
            let residues = args
                .split(',')
                .map(|r| num::<u64>(r, "residue"))
                .collect::<Result<Vec<_>>>()?;
            TargetSet::subset(*modulus, &residues)
        }
        "arc" => {
            let (a, b) = pair()?;
            CircleArc::from_endpoints(num(a, "arc start")?, num(b, "arc end")?).map(TargetSet::Arc)
        }
        "dyadic" => {
            let (k, i) = pair()?;
            TargetSet::dyadic(num(k, "dyadic depth")?, num(i, "dyadic index")?)
        }
        "jn" => {
            let System::CircleRotation { source, .. } = system else {
                return Err(Error::Parse(format!("`{spec}` needs a circle rotation")));
            };
            let (z, n) = pair()?;
            let z: f64 = num(z, "base point")?;
            return renormalization_interval(source, Frac64::from_f64(z), num(n, "renormalization index")?)
                .map(TargetSet::Arc);
        }
        _ => return Err(Error::Parse(format!("unknown set `{spec}`"))),
    }
    .map_err(|e| Error::Parse(e.to_string()))?;
    if !set.fits(system) {
        return Err(Error::Parse(format!("set `{spec}` does not live on {system:?}")));
    }
    Ok(set)
}
