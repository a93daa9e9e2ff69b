use std::fs;
use std::path::Path;

use serde::Serialize;
use serde_json::json;

use geproci_core::concurrency::{concurrency_scan, format_scan, VERIFIED_UP_TO};
use geproci_core::construct::{all_mu, assemble_pair, construct, initial_data, run_all_mu, MuAssignment};
use geproci_core::exactalg::{parse_rat, CycElem, FieldContext};
use geproci_core::geproci::{is_geproci, GeprociCert, GeprociVerdict};
use geproci_core::halfgrid::{
    detect_structure, f4_root_model, find_projective_equivalence, standard_grid, standard_halfgrid, Config,
    Equivalence, HalfGridVariant, Structure,
};
use geproci_core::perms::{admissible_report, FixedPointReport, GroupVerdict};
use geproci_core::projgeom::format_line_ideal;
use geproci_core::tables::check_table;

use crate::manifest::{Failure, Output};
use crate::{Cli, Command, Format};

type Run = Result<Output, Failure>;

pub fn run(cli: &Cli) -> Run {
    if cli.conductor == Some(0) {
        return Err(Failure::input("conductor must be positive"));
    }
    match &cli.command {
        Command::Tables { which } => tables(cli, *which),
        Command::Construct { mu } => construct_cmd(cli, mu),
        Command::Verify { config, a, b } => verify(cli, config, *a, *b),
        Command::CheckCert { cert, config } => check_cert(cli, cert, config.as_deref()),
        Command::Concurrency { m_min, m_max } => concurrency(cli, *m_min, *m_max),
        Command::Admissible { q } => admissible(cli, q),
        Command::Standard { kind, m } => standard(cli, kind, *m),
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_config(path: &Path, conductor: Option<u32>) -> Result<Config, Failure> {
    let z = Config::from_json(&read(path)?)?;
    embed_config(z, conductor)
}

fn embed_config(z: Config, conductor: Option<u32>) -> Result<Config, Failure> {
    match conductor {
        None => Ok(z),
        Some(n) if n % z.conductor() != 0 => Err(Failure::input(format!(
            "a conductor-{} configuration does not embed in Q(ζ_{n})",
            z.conductor()
        ))),
        Some(n) => z
            .embed(n)
            .map_err(|e| Failure::input(format!("cannot move a conductor-{} configuration to Q(ζ_{n}): {e}", z.conductor()))),
    }
}

fn fixed_conductor(cli: &Cli, what: &str) -> Result<(), Failure> {
    match cli.conductor {
        Some(n) => Err(Failure::input(format!("{what} are computed over a fixed field; --conductor {n} does not apply"))),
        None => Ok(()),
    }
}

fn tables(cli: &Cli, which: u8) -> Run {
    fixed_conductor(cli, "tables")?;
    let report = check_table(which)?;
    let body = match cli.format {
        Format::Text => report.to_text(),
        Format::Json => to_json(&report),
    };
    Ok(Output {
        command: "tables",
        parameters: json!({ "which": which }),
        conductor: None,
        files: vec![(format!("table{which}.{}", ext(cli.format)), body.clone())],
        stdout: body,
        ok: report.ok(),
    })
}

fn ext(f: Format) -> &'static str {
    match f {
        Format::Text => "txt",
        Format::Json => "json",
    }
}

fn parse_mu(s: &str) -> Result<MuAssignment, Failure> {
    if let Ok(row) = s.parse::<usize>() {
        return all_mu()
            .get(row.wrapping_sub(1))
            .copied()
            .ok_or_else(|| Failure::input(format!("row must be in 1..=6, got {row}")));
    }
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 2 {
        return Err(Failure::input(format!("expected all, a row 1-6 or sigma2:sigma3, got {s:?}")));
    }
    Ok(MuAssignment::from_pair(parts[0].parse()?, parts[1].parse()?)?)
}

fn construct_cmd(cli: &Cli, mu: &str) -> Run {
    if mu != "all" {
        return construct_one(cli, mu);
    }
    let report = run_all_mu()?;
    let f4 = f4_root_model();
    let mut files = vec![("report.json".to_string(), report.to_json() + "\n")];
    let mut text = report.to_text();
    let mut ok = report.all_match();
    let mut equivalences = Vec::new();
    let mut conductor = None;
    for group in &report.pairing {
        let [r1, r2] = group[..] else {
            ok = false;
            text.push_str(&format!("rows {group:?} do not form a pair\n"));
            continue;
        };
        let pair = embed_config(assemble_pair([r1, r2])?, cli.conductor)?;
        conductor = Some(pair.conductor());
        let equivalent = match find_projective_equivalence(&pair, &f4)? {
            Equivalence::Equivalent(cert) => {
                cert.validate(&pair, &f4)?;
                files.push((format!("equivalence_{r1}_{r2}.json"), to_json(&cert)));
                true
            }
            Equivalence::NotEquivalent => false,
        };
        ok &= equivalent;
        text.push_str(&format!(
            "pair {{{r1},{r2}}}: {} points, {} to the F4 model\n",
            pair.len(),
            if equivalent { "projectively equivalent" } else { "NOT equivalent" }
        ));
        equivalences.push(json!({ "rows": [r1, r2], "equivalent_to_f4": equivalent }));
        files.push((format!("pair_{r1}_{r2}.json"), pair.to_json() + "\n"));
    }
    let stdout = match cli.format {
        Format::Text => text,
        Format::Json => to_json(&json!({ "report": report, "pairs": equivalences })),
    };
    Ok(Output {
        command: "construct",
        parameters: json!({ "mu": "all" }),
        conductor,
        stdout,
        files,
        ok,
    })
}

fn construct_one(cli: &Cli, sel: &str) -> Run {
    let mu = parse_mu(sel)?;
    let res = construct(&initial_data(), &mu)?;
    let z20 = embed_config(res.z20.clone(), cli.conductor)?;
    let row = all_mu().iter().position(|m| *m == mu).map(|k| k + 1);
    let pts = |v: &[geproci_core::projgeom::ProjPoint]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>();
    let summary = json!({
        "mu": mu.to_string(),
        "row": row,
        "external": format_line_ideal(&res.external),
        "r": pts(&res.r),
        "l4": format_line_ideal(&res.l4),
        "p4": pts(&res.p4),
    });
    let stdout = match cli.format {
        Format::Text => format!(
            "mu = {mu}\nL  = {}\nR  = {}\nL4 = {}\nP4 = {}\n",
            format_line_ideal(&res.external),
            pts(&res.r).join(" "),
            format_line_ideal(&res.l4),
            pts(&res.p4).join(" ")
        ),
        Format::Json => to_json(&summary),
    };
    let name = match row {
        Some(k) => format!("z20_row_{k}.json"),
        None => "z20.json".into(),
    };
    Ok(Output {
        command: "construct",
        parameters: json!({ "mu": sel }),
        conductor: Some(z20.conductor()),
        stdout,
        files: vec![(name, z20.to_json() + "\n")],
        ok: true,
    })
}

fn describe_structure(s: &Structure) -> String {
    match s {
        Structure::Grid(g) => format!(
            "grid: {} lines and {} lines meeting in every pair",
            g.a_lines.len(),
            g.b_lines.len()
        ),
        Structure::HalfGrid(h) => format!(
            "half grid: {} skew lines; no grid (at most {} skew lines with {} points, {} needed)",
            h.lines.len(),
            h.grid_refutation.largest_skew_family,
            h.grid_refutation.points_per_line,
            h.grid_refutation.lines_needed
        ),
        Structure::Neither => "neither grid nor half grid".into(),
    }
}

fn describe_verdict(v: &GeprociVerdict, a: usize, b: usize) -> String {
    let mut s = String::new();
    if let Some(cert) = &v.cert {
        for (k, t) in cert.trials.iter().enumerate() {
            let c = t.center.as_ref().map(|c| c.to_string()).unwrap_or_default();
            s.push_str(&format!(
                "trial {}: center {c}  nonzero resultant at shear {:?}, point {:?}\n",
                k + 1,
                t.witness.shear,
                t.witness.at
            ));
        }
    }
    for f in &v.failures {
        s.push_str(&format!("failed: center {}  {}\n", f.center, f.reason));
    }
    if v.resampled > 0 {
        s.push_str(&format!("resampled centers: {}\n", v.resampled));
    }
    s.push_str(&format!(
        "{} ({a},{b})\n",
        if v.geproci { "geproci: certified complete intersection" } else { "not certified as geproci" }
    ));
    s
}

fn verify(cli: &Cli, path: &Path, a: usize, b: usize) -> Run {
    let z = load_config(path, cli.conductor)?;
    let structure = detect_structure(&z, a, b)?;
    let verdict = is_geproci(&z, a, b, cli.trials, cli.seed)?;
    let mut files = Vec::new();
    if let Some(cert) = &verdict.cert {
        cert.validate_against(&z)?;
        files.push(("certificate.json".to_string(), cert.to_json() + "\n"));
    }
    let stdout = match cli.format {
        Format::Text => format!("structure: {}\n{}", describe_structure(&structure), describe_verdict(&verdict, a, b)),
        Format::Json => to_json(&json!({ "structure": structure, "verdict": verdict })),
    };
    Ok(Output {
        command: "verify",
        parameters: json!({ "config": path.display().to_string(), "a": a, "b": b, "trials": cli.trials }),
        conductor: Some(z.conductor()),
        stdout,
        files,
        ok: verdict.geproci,
    })
}

fn check_cert(cli: &Cli, path: &Path, config: Option<&Path>) -> Run {
    let cert = GeprociCert::from_json(&read(path)?)?;
    let outcome = match config {
        Some(p) => cert.validate_against(&load_config(p, cli.conductor)?),
        None => cert.validate(),
    };
    let stdout = match (&outcome, cli.format) {
        (Ok(()), Format::Text) => format!("valid ({},{}) certificate, {} trials\n", cert.a, cert.b, cert.trials.len()),
        (Err(e), Format::Text) => format!("invalid certificate: {e}\n"),
        (_, Format::Json) => to_json(&json!({
            "valid": outcome.is_ok(),
            "reason": outcome.as_ref().err().map(|e| e.to_string()),
        })),
    };
    Ok(Output {
        command: "check-cert",
        parameters: json!({
            "cert": path.display().to_string(),
            "config": config.map(|p| p.display().to_string()),
        }),
        conductor: cli.conductor,
        stdout,
        files: vec![],
        ok: outcome.is_ok(),
    })
}

fn concurrency(cli: &Cli, m_min: u32, m_max: u32) -> Run {
    fixed_conductor(cli, "concurrency points")?;
    let rows = concurrency_scan(m_min, m_max)?;
    let ok = rows
        .iter()
        .filter(|r| r.m <= VERIFIED_UP_TO)
        .all(|r| r.count == 2 && r.spot_check_count == 2 && r.formula_points_found);
    let body = match cli.format {
        Format::Text => format_scan(&rows),
        Format::Json => to_json(&rows),
    };
    Ok(Output {
        command: "concurrency",
        parameters: json!({ "m_min": m_min, "m_max": m_max }),
        conductor: None,
        files: vec![(format!("concurrency.{}", ext(cli.format)), body.clone())],
        stdout: body,
        ok,
    })
}

fn describe_fixed(f: &FixedPointReport) -> String {
    match f {
        FixedPointReport::InField(p) if p[0] == p[1] => format!("{} (double)", p[0]),
        FixedPointReport::InField(p) => format!("{} and {}", p[0], p[1]),
        FixedPointReport::Symbolic { center, radicand } if center.is_zero() => format!("[1:±a] with a² = {radicand}"),
        FixedPointReport::Symbolic { center, radicand } => format!("[1:{center}±a] with a² = {radicand}"),
    }
}

fn admissible(cli: &Cli, q: &str) -> Run {
    let (value, conductor) = if q.eq_ignore_ascii_case("anharmonic") {
        let n = cli.conductor.unwrap_or(12);
        if !n.is_multiple_of(6) {
            return Err(Failure::input(format!("a primitive sixth root of unity needs 6 | conductor, got {n}")));
        }
        // 1/q is a primitive sixth root of unity, so q = ζ₆⁵
        let ctx = FieldContext::get(n);
        (CycElem::zeta_pow(&ctx, (5 * n / 6) as i64), n)
    } else {
        let n = cli.conductor.unwrap_or(4);
        (CycElem::from_rat(&FieldContext::get(n), &parse_rat(q)?), n)
    };
    let report = admissible_report(&value)?;
    let sets = report.admissible();
    let stdout = match cli.format {
        Format::Json => to_json(&json!({ "q": value.to_string(), "report": report, "admissible": sets })),
        Format::Text => {
            let perms = |v: &[geproci_core::perms::PermS4]| v.iter().map(|p| p.to_string()).collect::<Vec<_>>().join(" ");
            let mut s = format!("q = {value}\nstabilizer ({}): {}\n", report.stabilizer.len(), perms(&report.stabilizer));
            s.push_str(&format!("dropped, has a fixed point: {}\n", perms(&report.with_fixed_points)));
            for g in &report.groups {
                let why = match g.verdict {
                    GroupVerdict::Kept => "kept",
                    GroupVerdict::Alone => "dropped, no other permutation has the same fixed points",
                    GroupVerdict::ColumnClash => "dropped, two members send some k to the same value",
                    GroupVerdict::AllInvolutions => "dropped, every member is an involution",
                };
                s.push_str(&format!("{}  fixed points {}  {why}\n", perms(&g.perms), describe_fixed(&g.fixed_points)));
            }
            if sets.is_empty() {
                s.push_str("no admissible sets\n");
            }
            for set in &sets {
                s.push_str(&format!("admissible: {}  fixed points {}\n", perms(&set.perms), describe_fixed(&set.fixed_points)));
            }
            s
        }
    };
    Ok(Output {
        command: "admissible",
        parameters: json!({ "q": q }),
        conductor: Some(conductor),
        files: vec![(format!("admissible.{}", ext(cli.format)), stdout.clone())],
        stdout,
        ok: true,
    })
}

fn standard(cli: &Cli, kind: &str, m: Option<u32>) -> Run {
    let need_m = || m.ok_or_else(|| Failure::input(format!("{kind} needs m")));
    let z = match kind.to_ascii_lowercase().as_str() {
        "f4" => f4_root_model(),
        "grid" => standard_grid(need_m()?)?,
        v => standard_halfgrid(need_m()?, v.parse::<HalfGridVariant>()?)?,
    };
    let z = embed_config(z, cli.conductor)?;
    let body = z.to_json() + "\n";
    let name = match m {
        Some(m) => format!("{}_{m}.json", kind.to_ascii_lowercase()),
        None => format!("{}.json", kind.to_ascii_lowercase()),
    };
    Ok(Output {
        command: "standard",
        parameters: json!({ "kind": kind, "m": m }),
        conductor: Some(z.conductor()),
        files: vec![(name, body.clone())],
        stdout: body,
        ok: true,
    })
}
