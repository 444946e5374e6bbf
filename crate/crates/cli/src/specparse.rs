//! Command-line grammars: spaces, families, theorems, ranges, profiles.
//!
//! Space syntax mirrors `SpaceSpec`'s `Display` output, so specs round-trip
//! through reports:
//!
//! * `lp:P`
//! * `lorentz:P,Q` (`Q` may be `inf`)
//! * `marcinkiewicz:t^A` and `lambda:t^A`
//! * `orlicz:powerP`, `orlicz:exp`, `orlicz:zygmund` (alias `ulogu`)
//! * `xklog:BASE,K` or `xklog:BASE,K,W` with `W` in `{ln, 1+ln}`; the base
//!   is itself a space spec, split at the trailing commas.

use std::fs;
use std::path::Path;

use dimsob_core::profile::StepProfile;
use dimsob_core::space::{PhiSpec, SpaceSpec, WeightVariant, YoungSpec};

use crate::family::{CapShape, CubeShape, FamilySpec, Geometry, RadialShape};
use crate::verify::{HarnessError, TheoremKey};

fn config_err(msg: String) -> HarnessError {
    HarnessError::Config(msg)
}

fn parse_f64(s: &str, what: &str) -> Result<f64, HarnessError> {
    s.trim()
        .parse::<f64>()
        .map_err(|_| config_err(format!("{what}: expected a number, got '{s}'")))
}

fn parse_phi(body: &str) -> Result<PhiSpec, HarnessError> {
    let Some(rest) = body.strip_prefix("t^") else {
        return Err(config_err(format!(
            "fundamental function must be of the form t^A, got '{body}'"
        )));
    };
    Ok(PhiSpec::Power { alpha: parse_f64(rest, "fundamental function exponent")? })
}

/// Parses a space spec; see the module docs for the grammar.
pub fn parse_space(input: &str) -> Result<SpaceSpec, HarnessError> {
    let s = input.trim();
    let (head, body) = s
        .split_once(':')
        .ok_or_else(|| config_err(format!("space spec '{s}' has no ':'")))?;
    let spec = match head {
        "lp" => SpaceSpec::Lp { p: parse_f64(body, "lp exponent")? },
        "lorentz" => {
            let (p, q) = body
                .split_once(',')
                .ok_or_else(|| config_err(format!("lorentz spec '{body}' needs P,Q")))?;
            let q = if q.trim() == "inf" {
                f64::INFINITY
            } else {
                parse_f64(q, "lorentz second exponent")?
            };
            SpaceSpec::LorentzPQ { p: parse_f64(p, "lorentz first exponent")?, q }
        }
        "lambda" => SpaceSpec::LorentzLambda { phi: parse_phi(body)? },
        "marcinkiewicz" => SpaceSpec::Marcinkiewicz { phi: parse_phi(body)? },
        "orlicz" => {
            let young = match body {
                "exp" => YoungSpec::ExpMinusOne,
                "zygmund" | "ulogu" => YoungSpec::ULogU,
                other => {
                    let Some(rest) = other.strip_prefix("power") else {
                        return Err(config_err(format!(
                            "unknown Orlicz function '{other}'; use powerP, exp, or zygmund"
                        )));
                    };
                    YoungSpec::Power { p: parse_f64(rest, "Orlicz power")? }
                }
            };
            SpaceSpec::Orlicz { young }
        }
        "xklog" => {
            // BASE may itself contain commas; k and the optional weight
            // are the trailing segments.
            let mut tail_weight = WeightVariant::Ln;
            let mut rest = body;
            if let Some((head2, w)) = body.rsplit_once(',') {
                match w.trim() {
                    "ln" => {
                        tail_weight = WeightVariant::Ln;
                        rest = head2;
                    }
                    "1+ln" => {
                        tail_weight = WeightVariant::OnePlusLn;
                        rest = head2;
                    }
                    _ => {}
                }
            }
            let (base_str, k_str) = rest
                .rsplit_once(',')
                .ok_or_else(|| config_err(format!("xklog spec '{body}' needs BASE,K")))?;
            let k: u32 = k_str
                .trim()
                .parse()
                .map_err(|_| config_err(format!("xklog order: expected an integer, got '{k_str}'")))?;
            SpaceSpec::log_refined(parse_space(base_str)?, k, tail_weight)
        }
        other => {
            return Err(config_err(format!(
                "unknown space kind '{other}'; use lp, lorentz, lambda, marcinkiewicz, orlicz, or xklog"
            )));
        }
    };
    spec.validate().map_err(HarnessError::Space)?;
    Ok(spec)
}

/// Parses a family selector: `radial:NAME`, `cap:NAME`, or `tensor:NAME`.
pub fn parse_family(input: &str) -> Result<FamilySpec, HarnessError> {
    let s = input.trim();
    let (head, body) = s
        .split_once(':')
        .ok_or_else(|| config_err(format!("family '{s}' has no ':'")))?;
    match head {
        "radial" => {
            let shape = match body {
                "linear" => RadialShape::Linear,
                "quadratic" => RadialShape::Quadratic,
                "cosine" => RadialShape::Cosine,
                "plateau" => RadialShape::Plateau,
                "power" => RadialShape::Power,
                "bump2" => RadialShape::Bump2,
                "cosbump" => RadialShape::CosBump,
                other => {
                    return Err(config_err(format!("unknown radial family '{other}'")));
                }
            };
            Ok(FamilySpec::Radial(shape))
        }
        "cap" => {
            let shape = match body {
                "linear" => CapShape::Linear,
                "height" => CapShape::Height,
                "coshalf" => CapShape::CosHalf,
                "plateau" => CapShape::Plateau,
                "quadratic" => CapShape::Quadratic,
                other => {
                    return Err(config_err(format!("unknown cap family '{other}'")));
                }
            };
            Ok(FamilySpec::Cap(shape))
        }
        "tensor" => {
            let shape = match body {
                "coord" => CubeShape::Coord,
                "max2" => CubeShape::Max2,
                other => {
                    return Err(config_err(format!("unknown tensor family '{other}'")));
                }
            };
            Ok(FamilySpec::Tensor(shape))
        }
        other => Err(config_err(format!(
            "unknown family kind '{other}'; use radial, cap, or tensor"
        ))),
    }
}

pub fn parse_theorem(input: &str) -> Result<TheoremKey, HarnessError> {
    match input.trim() {
        "main1" => Ok(TheoremKey::Main1),
        "main2" => Ok(TheoremKey::Main2),
        "teo01" => Ok(TheoremKey::Teo01),
        "ordenk" => Ok(TheoremKey::Ordenk),
        "inclusion" => Ok(TheoremKey::Inclusion),
        "esfera" => Ok(TheoremKey::Esfera),
        other => Err(config_err(format!(
            "unknown theorem '{other}'; use main1, main2, teo01, ordenk, inclusion, or esfera"
        ))),
    }
}

pub fn parse_geometry(input: &str) -> Result<Geometry, HarnessError> {
    match input.trim() {
        "rn" => Ok(Geometry::Rn),
        "ball" => Ok(Geometry::Ball),
        "sphere" => Ok(Geometry::Sphere),
        "cube" => Ok(Geometry::Cube),
        other => Err(config_err(format!(
            "unknown geometry '{other}'; use rn, ball, sphere, or cube"
        ))),
    }
}

/// Inclusive dimension range `A..B`; a bare `A` means `A..A`.
pub fn parse_n_range(input: &str) -> Result<(u32, u32), HarnessError> {
    let s = input.trim();
    let parse_u32 = |v: &str| -> Result<u32, HarnessError> {
        v.trim()
            .parse::<u32>()
            .map_err(|_| config_err(format!("dimension range: expected an integer, got '{v}'")))
    };
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (parse_u32(a)?, parse_u32(b)?),
        None => {
            let v = parse_u32(s)?;
            (v, v)
        }
    };
    if a == 0 || b < a {
        return Err(config_err(format!("invalid dimension range {a}..{b}")));
    }
    Ok((a, b))
}

/// Reads a step profile from a two-column CSV of `breakpoint,value` rows.
/// Blank lines, `#` comments, and a `breakpoint,value` header are skipped.
pub fn parse_profile_csv(path: &Path) -> Result<StepProfile, HarnessError> {
    let text = fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read profile {}: {e}", path.display())))?;
    let mut breakpoints = Vec::new();
    let mut values = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if idx == 0 && line.eq_ignore_ascii_case("breakpoint,value") {
            continue;
        }
        let (b, v) = line.split_once(',').ok_or_else(|| {
            config_err(format!(
                "profile {} line {}: expected 'breakpoint,value'",
                path.display(),
                idx + 1
            ))
        })?;
        breakpoints.push(parse_f64(b, "profile breakpoint")?);
        values.push(parse_f64(v, "profile value")?);
    }
    StepProfile::new(breakpoints, values).map_err(HarnessError::Profile)
}
