//! `atlas`: enumerate every protected coherence pair per carrier dimension —
//! which branch class protects it and whether the protection is a one-step
//! reduction or an exact restore. With an environment dimension configured,
//! the table also carries the factor actually reached by a seeded commuting
//! model, so the classification can be eyeballed against numbers.

use telsim::factors::{purification_pattern, second_step_factor, PurificationKind};
use telsim::models::{commuting_model, random_mixed_env};

use crate::config::ScenarioConfig;
use crate::csvout::{fmt_sig12, Csv};
use crate::opts::RunOptions;

pub fn run(config: &ScenarioConfig, opts: &RunOptions) -> Result<i32, String> {
    let dims = config
        .grid
        .dims
        .clone()
        .unwrap_or_else(|| vec![2, 3, 4]);
    let env_dim = config.model.env_dim;
    let tau = config.protocol.tau1.unwrap_or(1.0);

    let mut csv = Csv::new("d,m,m_prime,j,j_prime,kind,re,im");
    for &d in &dims {
        let entries = purification_pattern(d).map_err(|e| e.to_string())?;
        let evaluated = match env_dim {
            None => None,
            Some(e) => {
                let model = commuting_model(d, e, opts.seed).map_err(|err| err.to_string())?;
                let env =
                    random_mixed_env(e, opts.seed + d as u64).map_err(|err| err.to_string())?;
                let w = model.conditional_evolutions(tau).map_err(|err| err.to_string())?;
                Some((w, env))
            }
        };
        for entry in &entries {
            let (re, im) = match &evaluated {
                None => (String::new(), String::new()),
                Some((w, env)) => {
                    let c = second_step_factor(
                        w,
                        w,
                        env,
                        0,
                        entry.m,
                        entry.m_prime,
                        entry.j,
                        entry.j_prime,
                    )
                    .map_err(|err| err.to_string())?;
                    (fmt_sig12(c.re), fmt_sig12(c.im))
                }
            };
            csv.row(&[
                entry.d.to_string(),
                entry.m.to_string(),
                entry.m_prime.to_string(),
                entry.j.to_string(),
                entry.j_prime.to_string(),
                kind_label(entry.kind).to_string(),
                re,
                im,
            ]);
        }
    }
    if let Some(name) = &config.scenario.name {
        csv.comment(&format!("scenario = {name}"));
    }
    let rows = csv.rows();
    let path = opts.resolve_out("atlas.csv");
    opts.write_file(&path, &csv.finish(), rows)?;
    Ok(0)
}

fn kind_label(kind: PurificationKind) -> &'static str {
    match kind {
        PurificationKind::OneStep => "ONE_STEP",
        PurificationKind::FullRestore => "FULL_RESTORE",
        PurificationKind::Unprotected => "UNPROTECTED",
    }
}
