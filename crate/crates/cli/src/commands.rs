use std::path::Path;

use fcat_core::constructions::{
    extract_category, free_strict_on_graph, from_category, from_strict_2category, CategoryPresentation, GraphData,
    TwoCategoryPresentation,
};
use fcat_core::derived::{
    arrow_category, cell_levels, check_globular, classify_shape, discreteness, power_structure, TriState,
};
use fcat_core::equiv::{decide_equiv, verify_cert, EquivMode, RationalCert};
use fcat_core::ids::obj;
use fcat_core::weak::{check_coherence, check_theta_table, validate_mu, weak_of, Axiom, CoherenceBounds, MuBounds};
use fcat_core::{
    parse_presentation, truncate_oracle, validate_presentation, FcatError, Generative, Presentation, Report, Status,
    TruncateOptions,
};
use serde_json::json;

use crate::output::{emit, read, write_atomic, CliError, CliResult, Header, DEFAULT_STATES};
use crate::{CheckArgs, Cli, Command, DeriveWhat, ImportKind, Mode};

fn states(cli: &Cli) -> CliResult<usize> {
    if let Some(n) = cli.budget_states {
        return Ok(n);
    }
    match std::env::var("FCAT_BUDGET_STATES") {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("FCAT_BUDGET_STATES must be a count, got `{v}`"))),
        Err(_) => Ok(DEFAULT_STATES),
    }
}

fn mode(m: Mode) -> EquivMode {
    match m {
        Mode::Exact => EquivMode::Exact,
        Mode::Optimistic => EquivMode::Optimistic,
    }
}

fn load(path: &Path, header: &mut Header) -> CliResult<Presentation> {
    let text = read(path)?;
    header.input(&text);
    Ok(parse_presentation(&text)?)
}

/// Checker errors other than budget exhaustion become failing findings.
fn absorb(r: &mut Report, id: &str, out: fcat_core::Result<Report>) -> CliResult<()> {
    match out {
        Ok(sub) => r.merge(sub),
        Err(e @ FcatError::BudgetExhausted { .. }) => return Err(e.into()),
        Err(e) => r.fail(id, json!({ "error": e.to_string() })),
    }
    Ok(())
}

pub fn run(cli: &Cli) -> CliResult<u8> {
    let states = states(cli)?;
    let json_out = cli.json.as_deref();
    match &cli.command {
        Command::Validate { file } => {
            let mut h = Header::new("validate", states);
            let p = load(file, &mut h)?;
            emit(&validate_presentation(&p), &h, json_out)
        }
        Command::Check(args) => check(args, states, json_out),
        Command::Equiv {
            file,
            a,
            b,
            mode: m,
            emit_cert,
        } => {
            let mut h = Header::new("equiv", states);
            h.budget("mode", format!("{:?}", mode(*m)).to_lowercase());
            let p = load(file, &mut h)?;
            let (a, b) = (obj(a), obj(b));
            for o in [&a, &b] {
                if !p.has_object(o) {
                    return Err(CliError::Usage(format!("`{o}` is not an object of the presentation")));
                }
            }
            let rel = decide_equiv(&p, mode(*m));
            let mut r = Report::new();
            let wit = json!({ "left": a, "right": b });
            match rel.extract(&a, &b) {
                None => r.fail("equiv", wit),
                Some(cert) => {
                    r.note(
                        "equiv",
                        Status::Pass,
                        json!({ "left": a, "right": b, "nodes": cert.len() }),
                    );
                    r.merge(verify_cert(&p, &cert));
                    if let Some(out) = emit_cert {
                        write_atomic(out, &cert.to_canonical_json())?;
                    }
                }
            }
            emit(&r, &h, json_out)
        }
        Command::CertVerify { file, cert } => {
            let mut h = Header::new("cert-verify", states);
            let p = load(file, &mut h)?;
            let text = read(cert)?;
            h.input(&text);
            let c = RationalCert::from_json_str(&text)?;
            emit(&verify_cert(&p, &c), &h, json_out)
        }
        Command::Cells { file, max_level } => {
            let mut h = Header::new("cells", states);
            h.budget("max-level", *max_level);
            let p = load(file, &mut h)?;
            emit(&cells(&p, *max_level), &h, json_out)
        }
        Command::Derive { what } => derive(what, states, json_out),
        Command::Import {
            kind,
            file,
            depth,
            path_budget,
            output,
        } => {
            let mut h = Header::new("import", states);
            h.budget("depth", *depth);
            h.budget("path-budget", *path_budget);
            let text = read(file)?;
            h.input(&text);
            let opts = TruncateOptions {
                tower_depth: *depth,
                path_budget: *path_budget,
                state_budget: states,
                with_weak: true,
            };
            let cut = |o: &dyn Generative| truncate_oracle(o, opts);
            let p = match kind {
                ImportKind::Category => cut(&from_category(&CategoryPresentation::from_json_str(&text)?)?)?,
                ImportKind::TwoCategory => {
                    cut(&from_strict_2category(&TwoCategoryPresentation::from_json_str(&text)?)?)?
                }
                ImportKind::Graph => cut(&free_strict_on_graph(&GraphData::from_json_str(&text)?)?)?,
            };
            let mut r = validate_presentation(&p);
            r.note(
                "import",
                Status::Pass,
                json!({ "objects": p.num_objects(), "arrows": p.num_arrows(), "frontier": p.frontier().len() }),
            );
            write_atomic(output, &p.to_canonical_json())?;
            emit(&r, &h, json_out)
        }
        Command::Extract { file, output } => {
            let mut h = Header::new("extract", states);
            let p = load(file, &mut h)?;
            let c = extract_category(&p)?;
            let mut r = Report::new();
            r.note(
                "extract",
                Status::Pass,
                json!({ "objects": c.objects.len(), "morphisms": c.morphisms.len() }),
            );
            write_atomic(output, &c.to_canonical_json())?;
            emit(&r, &h, json_out)
        }
    }
}

fn check(args: &CheckArgs, states: usize, json_out: Option<&Path>) -> CliResult<u8> {
    let mut h = Header::new("check", states);
    let axioms = args
        .axioms
        .iter()
        .map(|a| a.parse::<Axiom>().map_err(|e| CliError::Usage(e.to_string())))
        .collect::<CliResult<Vec<_>>>()?;
    h.budget("axioms", axioms.iter().map(|a| a.to_string()).collect::<Vec<_>>());
    h.budget("max-path-len", args.max_path_len);
    h.budget("max-arity", args.max_arity);
    h.budget("mode", format!("{:?}", mode(args.mode)).to_lowercase());
    let p = load(&args.file, &mut h)?;
    let w = weak_of(&p);

    let mut r = validate_presentation(&p);
    r.merge(check_globular(&p));
    let mu = MuBounds {
        max_arity: args.max_arity,
        budget: states,
    };
    absorb(&mut r, "mu", validate_mu(&p, &w, mu))?;
    let bounds = CoherenceBounds {
        max_len: args.max_path_len,
        mode: mode(args.mode),
        budget: states,
    };
    absorb(&mut r, "coherence", check_coherence(&p, &axioms, bounds))?;
    absorb(&mut r, "theta", check_theta_table(&p, bounds))?;
    emit(&r, &h, json_out)
}

fn cells(p: &Presentation, max_level: usize) -> Report {
    let mut r = Report::new();
    let levels = cell_levels(p, max_level);
    for o in p.objects_sorted() {
        if let Some(l) = levels.level(o) {
            let status = if levels.lower_bound_only.contains(o) {
                Status::SkippedFrontier
            } else {
                Status::Pass
            };
            r.note("cell-level", status, json!({ "object": o, "level": l }));
        }
        let d = discreteness(p, o, max_level);
        let status = if d == TriState::Frontier {
            Status::SkippedFrontier
        } else {
            Status::Pass
        };
        r.note(
            "discrete",
            status,
            json!({ "object": o, "discrete": d == TriState::Yes }),
        );
    }
    let c = classify_shape(p, max_level);
    r.note(
        "shape",
        Status::Pass,
        json!({ "shape": format!("{:?}", c.shape), "frontier-limited": c.frontier_limited }),
    );
    r
}

fn derive(what: &DeriveWhat, states: usize, json_out: Option<&Path>) -> CliResult<u8> {
    let mut h = Header::new("derive", states);
    let (data, output) = match what {
        DeriveWhat::ArrowCat { file, output } => {
            let p = load(file, &mut h)?;
            (arrow_category(&p).to_data(), output)
        }
        DeriveWhat::Power { n, file, output } => {
            h.budget("arity", *n);
            let p = load(file, &mut h)?;
            if *n == 0 {
                return Err(CliError::Usage("power arity must be at least 1".into()));
            }
            (power_structure(&p, *n, states)?.to_data(&p), output)
        }
    };
    let mut r = Report::new();
    r.note(
        "derive",
        Status::Pass,
        json!({ "objects": data.objects.len(), "arrows": data.arrows.len() }),
    );
    write_atomic(output, &data.to_canonical_json())?;
    emit(&r, &h, json_out)
}
