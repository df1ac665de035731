use std::path::PathBuf;

use serde_json::{json, Value as Json};

use super::parse::{Command, CommandKind, LojaSource, Session, Value};
use super::report::{error_block, summarize_block, Report};
use crate::closure::{
    bs_verify_monomial, germ_bs_exponent, germ_closure_member, germ_ideal_member, huneke_mu,
    MonomialIdeal,
};
use crate::error::{Budget, Error, Result};
use crate::groebner::Ideal;
use crate::loja::{geometric_radii, loja_exponent_estimate, sample_variety, VarietySampler};
use crate::poly::{ExponentVector, Polynomial, RingContext};
use crate::resolution::{
    check_acyclicity, free_resolution, koszul_complex, FreeComplex, ResolutionMode,
};
use crate::strata::{
    check_bs_condition, check_cm_depth, check_normality_condition, strata_of_ideal,
};

/// Settings that apply to a whole run.
#[derive(Clone, Debug)]
pub struct RunOptions {
    /// Step budget given to each command.
    pub budget: u64,
    /// Default seed for sampling commands.
    pub seed: u64,
    /// Directory that relative output paths are resolved against.
    pub base_dir: Option<PathBuf>,
    /// Recorded in the report; `None` omits it.
    pub timestamp: Option<u64>,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions {
            budget: Budget::DEFAULT_LIMIT,
            seed: 0,
            base_dir: None,
            timestamp: None,
        }
    }
}

/// Output of one command: echoed inputs, the result and, for checks, the
/// data certifying it.
pub struct CommandOutput {
    pub inputs: Json,
    pub result: Json,
    pub certificate: Json,
}

/// Runs every command in order. Failures become error blocks; the run
/// always completes.
pub fn run_session(session: &Session, opts: &RunOptions) -> Report {
    let mut blocks = Vec::with_capacity(session.commands.len());
    let mut errors = Vec::new();
    for (index, cmd) in session.commands.iter().enumerate() {
        let mut block = json!({
            "index": index,
            "command": cmd.kind.name(),
            "source": cmd.source,
            "position": cmd.pos,
        });
        match run_command(session, cmd, opts) {
            Ok(out) => {
                block["status"] = json!("ok");
                block["inputs"] = out.inputs;
                block["result"] = out.result;
                block["certificate"] = out.certificate;
            }
            Err(e) => {
                block["status"] = json!("error");
                block["error"] = error_block(&e, Some(cmd.pos));
                errors.push(e);
            }
        }
        block["summary"] = json!(summarize_block(&block));
        blocks.push(block);
    }
    Report::new(session, opts, blocks, errors)
}

fn ideal<'a>(s: &'a Session, name: &str) -> Result<&'a Ideal> {
    s.ideal(name)
        .ok_or_else(|| Error::Validation(format!("unknown ideal `{name}`")))
}

fn gens(i: &Ideal) -> Json {
    json!(i
        .generators()
        .iter()
        .map(|g| g.to_string())
        .collect::<Vec<_>>())
}

fn ring_of(s: &Session) -> Result<&std::sync::Arc<RingContext>> {
    s.ring
        .as_ref()
        .ok_or_else(|| Error::Validation("no ring declared".into()))
}

fn complex_result(c: &FreeComplex, budget: &mut Budget) -> Result<(Json, Json)> {
    let ranks = c.ranks();
    let rho = c.expected_ranks();
    let consistent =
        (1..=c.len()).all(|k| rho[k - 1] + rho.get(k).copied().unwrap_or(0) == ranks[k] as i64);
    let acyclic = check_acyclicity(c, budget)?;
    Ok((
        json!({
            "complex": c.to_document(),
            "is_complex": c.is_complex(),
            "expected_ranks": rho,
            "ranks_consistent": consistent,
            "acyclic": acyclic.acyclic,
        }),
        json!({ "acyclicity": acyclic }),
    ))
}

/// Runs one command against the session's bindings.
pub fn run_command(s: &Session, cmd: &Command, opts: &RunOptions) -> Result<CommandOutput> {
    let mut budget = Budget::new(opts.budget);
    let b = &mut budget;
    let out = |inputs: Json, result: Json, certificate: Json| CommandOutput {
        inputs,
        result,
        certificate,
    };
    match &cmd.kind {
        CommandKind::Resolve {
            ideal: name,
            max_len,
            raw,
        } => {
            let i = ideal(s, name)?;
            let mode = if *raw {
                ResolutionMode::Raw
            } else {
                ResolutionMode::Graded
            };
            let c = free_resolution(i, *max_len, mode, b)?;
            let (result, cert) = complex_result(&c, b)?;
            Ok(out(
                json!({ "ideal": name, "generators": gens(i), "mode": if *raw { "raw" } else { "graded" } }),
                result,
                cert,
            ))
        }
        CommandKind::Koszul { ideal: name } => {
            let i = ideal(s, name)?;
            let c = koszul_complex(i.generators())?;
            let (result, cert) = complex_result(&c, b)?;
            Ok(out(
                json!({ "ideal": name, "generators": gens(i) }),
                result,
                cert,
            ))
        }
        CommandKind::Strata { ideal: name } => {
            let i = ideal(s, name)?;
            let (c, st) = strata_of_ideal(i, b)?;
            Ok(out(
                json!({ "ideal": name, "generators": gens(i) }),
                json!({ "strata": st.to_document(), "resolution_ranks": c.ranks() }),
                Json::Null,
            ))
        }
        CommandKind::CheckCm { ideal: name } => {
            let i = ideal(s, name)?;
            let (_, st) = strata_of_ideal(i, b)?;
            let dep = check_cm_depth(&st);
            let strata: Vec<Json> = st
                .strata
                .iter()
                .map(|x| json!({ "r": x.r, "dim": x.dim, "codim_in_z": x.codim_in_z }))
                .collect();
            Ok(out(
                json!({ "ideal": name, "generators": gens(i) }),
                json!({ "is_cm": dep.is_cm, "d": st.d, "depth_lower": dep.depth_lower, "depth_exact": dep.depth_exact }),
                json!({ "strata": strata }),
            ))
        }
        CommandKind::CheckNormal { ideal: name } => {
            let i = ideal(s, name)?;
            let (_, st) = strata_of_ideal(i, b)?;
            let rep = check_normality_condition(&st);
            Ok(out(
                json!({ "ideal": name, "generators": gens(i) }),
                json!({ "holds": rep.holds, "witness": rep.witness }),
                json!({ "checked": rep.checked }),
            ))
        }
        CommandKind::CheckBs { ideal: name, a, m } => {
            let i = ideal(s, name)?;
            let aid = ideal(s, a)?;
            let (_, st) = strata_of_ideal(i, b)?;
            let rep = check_bs_condition(&st, aid, *m, b)?;
            Ok(out(
                json!({ "ideal": name, "generators": gens(i), "a": gens(aid), "m": m }),
                json!({ "holds": rep.holds, "witness": rep.witness }),
                json!({ "checked": rep.checked }),
            ))
        }
        CommandKind::Member { poly, ideal: name } => {
            let i = ideal(s, name)?;
            let cert = i.membership_certificate(poly, b)?;
            let cofactors = cert
                .as_ref()
                .map(|h| json!(h.iter().map(|p| p.to_string()).collect::<Vec<_>>()));
            Ok(out(
                json!({ "poly": poly.to_string(), "ideal": name, "generators": gens(i) }),
                json!({ "member": cert.is_some() }),
                json!({ "cofactors": cofactors }),
            ))
        }
        CommandKind::Dim { ideal: name } => {
            let i = ideal(s, name)?;
            let d = i.dimension(b)?;
            Ok(out(
                json!({ "ideal": name, "generators": gens(i) }),
                json!({ "dim": d, "empty": d < 0 }),
                Json::Null,
            ))
        }
        CommandKind::Closure { ideal: name } => {
            let i = ideal(s, name)?;
            let m = monomial_ideal(i)?;
            let c = m.newton_closure()?;
            let ring = ring_of(s)?;
            Ok(out(
                json!({ "ideal": name, "generators": gens(i) }),
                json!({
                    "closure": c.generators().iter().map(|e| mono(ring, e)).collect::<Vec<_>>(),
                    "integrally_closed": c == m,
                }),
                Json::Null,
            ))
        }
        CommandKind::BsVerifyMonomial {
            ideal: name,
            ell,
            d,
        } => {
            let i = ideal(s, name)?;
            let m = monomial_ideal(i)?;
            let ring = ring_of(s)?;
            let d = d.unwrap_or(ring.nvars());
            let rep = bs_verify_monomial(&m, *ell, d)?;
            let cx = rep
                .counterexample
                .as_ref()
                .map(|v| mono(ring, &ExponentVector::new(v.clone())));
            Ok(out(
                json!({ "ideal": name, "generators": gens(i), "ell": ell, "d": d }),
                json!({ "holds": rep.holds, "exponent": rep.exponent, "counterexample": cx }),
                json!({ "maximal_non_members_tested": rep.candidates }),
            ))
        }
        CommandKind::GermMember {
            element,
            ideal: name,
        } => {
            let (sg, a) = germ(s, name)?;
            let member = germ_ideal_member(*element, a, sg)?;
            let cert = a
                .shifts()
                .iter()
                .find(|&&x| *element >= x && sg.contains(element - x))
                .map(|&x| json!({ "generator": format!("t^{x}"), "cofactor": format!("t^{}", element - x) }));
            Ok(out(
                json!({ "element": format!("t^{element}"), "ideal": name, "shifts": a.shifts() }),
                json!({ "member": member }),
                cert.unwrap_or(Json::Null),
            ))
        }
        CommandKind::GermClosureMember {
            element,
            ideal: name,
            power,
        } => {
            let (sg, a) = germ(s, name)?;
            let p = a.power(*power, sg);
            let member = germ_closure_member(*element, &p, sg)?;
            Ok(out(
                json!({ "element": format!("t^{element}"), "ideal": name, "shifts": a.shifts(), "power": power }),
                json!({ "member": member }),
                json!({ "element_order": element, "ideal_order": p.order() }),
            ))
        }
        CommandKind::GermExponent {
            ideal: name,
            ell,
            mode,
        } => {
            let (sg, a) = germ(s, name)?;
            let e = germ_bs_exponent(a, *ell, sg, *mode)?;
            Ok(out(
                json!({ "ideal": name, "shifts": a.shifts(), "ell": ell, "mode": mode }),
                json!({ "exponent": e.exponent }),
                json!({ "witness": e.witness.map(|w| format!("t^{w}")) }),
            ))
        }
        CommandKind::GermMu { v_max, ell_max } => {
            let sg = s
                .semigroup
                .as_ref()
                .ok_or_else(|| Error::Validation("no semigroup declared".into()))?;
            let r = huneke_mu(sg, *v_max, *ell_max)?;
            Ok(out(
                json!({ "semigroup": sg.generators(), "vmax": v_max, "lmax": ell_max }),
                json!({
                    "mu": r.mu,
                    "witness": { "ideal": r.witness_ideal.shifts(), "ell": r.witness_ell },
                    "note": "empirical lower bound over monomial ideals",
                }),
                json!({ "ideals_searched": r.ideals }),
            ))
        }
        CommandKind::Loja {
            phi,
            a,
            source,
            radii,
            samples,
            seed,
            csv,
        } => {
            let seed = seed.unwrap_or(opts.seed);
            let rs = geometric_radii(radii.0, radii.1, radii.2);
            let (sampler, src_json) = match source {
                LojaSource::Curve(exps) => (
                    VarietySampler::monomial_curve(exps, rs, *samples, seed),
                    json!({ "curve": exps }),
                ),
                LojaSource::Hypersurface {
                    ideal: name,
                    solve_for,
                } => {
                    let i = ideal(s, name)?;
                    let [f] = i.generators() else {
                        return Err(Error::Validation(format!(
                            "sampling needs a single equation, `{name}` has {}",
                            i.generators().len()
                        )));
                    };
                    let ring = ring_of(s)?;
                    (
                        VarietySampler::hypersurface(f.clone(), *solve_for, rs, *samples, seed),
                        json!({ "hypersurface": f.to_string(), "solve": ring.names()[*solve_for] }),
                    )
                }
            };
            let pts = sample_variety(&sampler)?;
            let est = loja_exponent_estimate(phi, a, &pts)?;
            let csv_path = match csv {
                Some(p) => {
                    let path = opts
                        .base_dir
                        .as_ref()
                        .map_or_else(|| PathBuf::from(p), |d| d.join(p));
                    std::fs::write(&path, est.to_csv()).map_err(|e| {
                        Error::Validation(format!("cannot write {}: {e}", path.display()))
                    })?;
                    Some(p.clone())
                }
                None => None,
            };
            Ok(out(
                json!({
                    "phi": phi.to_string(),
                    "a": a.iter().map(Polynomial::to_string).collect::<Vec<_>>(),
                    "source": src_json,
                    "radii": [radii.0, radii.1, radii.2],
                    "samples_per_radius": samples,
                    "seed": seed,
                }),
                json!({
                    "slope": est.slope,
                    "intercept": est.intercept,
                    "residual": est.residual,
                    "n_points": est.n_points,
                    "radii_range": [est.radii_range.0, est.radii_range.1],
                    "reliable": est.reliable,
                    "csv": csv_path,
                }),
                Json::Null,
            ))
        }
    }
}

fn germ<'a>(
    s: &'a Session,
    name: &str,
) -> Result<(
    &'a crate::closure::NumericalSemigroup,
    &'a crate::closure::SemigroupIdeal,
)> {
    let sg = s
        .semigroup
        .as_ref()
        .ok_or_else(|| Error::Validation("no semigroup declared".into()))?;
    match s.lookup(name) {
        Some(Value::GermIdeal(a)) => Ok((sg, a)),
        _ => Err(Error::Validation(format!("unknown germ ideal `{name}`"))),
    }
}

fn monomial_ideal(i: &Ideal) -> Result<MonomialIdeal> {
    let mut gens = Vec::new();
    for g in i.generators() {
        match g.terms() {
            [(e, _)] => gens.push(e.clone()),
            _ => return Err(Error::Validation(format!("`{g}` is not a monomial"))),
        }
    }
    MonomialIdeal::new(i.ring().nvars(), gens)
}

fn mono(ring: &std::sync::Arc<RingContext>, e: &ExponentVector) -> String {
    Polynomial::monomial(ring, e.clone(), crate::poly::int(1)).to_string()
}
