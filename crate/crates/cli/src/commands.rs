use std::fs;

use anyhow::{bail, Context};
use psym_core::fockstate::{self, filter, FockState, WeightMode, DEFAULT_FILTER_MAX_SPATIAL};
use psym_core::huckel::HuckelRing;
use psym_core::io::{self, Fcidump, Ordering};
use psym_core::pointgroup::{builtin_group, validate_table, Reduction, WeightReport};
use psym_core::slater::{enumerate_single_excitations, reduce_manifold, weights_sd, SlaterDeterminant};
use psym_core::tncompress::{compress as run_compress, infidelity, CompressOptions, Init, Mps};
use serde_json::json;

use crate::inputs::{self, emit};
use crate::{
    CharactersArgs, CliResult, CompressArgs, Failure, Mode, ModelArgs, ProjectArgs, ReduceArgs,
    WeightsArgs,
};

/// Weights this small are shown as zero.
const DISPLAY_ZERO: f64 = 1e-10;
/// Projections with a smaller norm count as vanishing.
const ZERO_NORM: f64 = 1e-10;

fn clamp(w: f64) -> f64 {
    if w.abs() < DISPLAY_ZERO {
        0.0
    } else {
        w
    }
}

fn fmt_complex(z: psym_core::linalg::C64) -> String {
    if z.im.abs() < 1e-12 {
        format!("{:.4}", z.re)
    } else {
        format!("{:.4}{:+.4}i", z.re, z.im)
    }
}

pub fn characters(args: &CharactersArgs, quiet: bool) -> CliResult {
    let group = inputs::group(&args.group)?;
    let t = &group.table;
    let violations = validate_table(t);
    let mut notes = Vec::new();
    if group.name.eq_ignore_ascii_case("D5d") {
        notes.push("E2u character under sigma_d is 0; the value +1 fails row orthogonality".to_string());
    }
    if !quiet {
        let mut s = format!("{} (order {})\n{:>8}", group.name, t.order(), "");
        for c in &t.classes {
            s.push_str(&format!(" {:>10}", format!("{}{}", if c.size > 1 { c.size.to_string() } else { String::new() }, c.label)));
        }
        s.push('\n');
        for (g, row) in t.irreps.iter().zip(&t.chi) {
            s.push_str(&format!("{:>8}", g.label));
            for z in row {
                s.push_str(&format!(" {:>10}", fmt_complex(*z)));
            }
            s.push('\n');
        }
        for n in &notes {
            s.push_str(&format!("note: {n}\n"));
        }
        if violations.is_empty() {
            s.push_str("table is valid\n");
        }
        for v in &violations {
            s.push_str(&format!("violation: {v}\n"));
        }
        eprint!("{s}");
    }
    let mut value = serde_json::to_value(io::group_to_json(&group))?;
    value["valid"] = json!(violations.is_empty());
    value["violations"] = json!(violations.iter().map(|v| v.to_string()).collect::<Vec<_>>());
    value["notes"] = json!(notes);
    emit(&args.output, &value, || {
        let mut s = String::from("irrep");
        for c in &t.classes {
            s.push_str(&format!(",{}", c.label));
        }
        s.push('\n');
        for (g, row) in t.irreps.iter().zip(&t.chi) {
            s.push_str(&g.label);
            for z in row {
                s.push_str(&format!(",{}", fmt_complex(*z)));
            }
            s.push('\n');
        }
        s
    })?;
    if violations.is_empty() {
        Ok(())
    } else {
        Err(Failure::Strict(format!(
            "character table has {} violation(s)",
            violations.len()
        )))
    }
}

fn print_weights(report: &WeightReport) {
    eprintln!("{} weights ({})", report.group, report.backend);
    for w in &report.weights {
        eprintln!("  {:>6}  {:.10}", w.irrep, clamp(w.weight));
    }
    eprintln!("  sum     {:.10}", report.sum_of_weights);
}

pub fn weights(args: &WeightsArgs, quiet: bool) -> CliResult {
    let (group, rep) = inputs::symmetry(&args.sym)?;
    let report = match (&args.source.dets, args.mode, &args.ucj) {
        (Some(path), Mode::Exact, None) => weights_sd(&inputs::single_det(path)?, &group, &rep)?,
        _ => {
            let state = inputs::fock(&args.source, args.ucj.as_deref())?;
            let mode = match args.mode {
                Mode::Exact => WeightMode::Exact,
                Mode::Pauli => WeightMode::Pauli,
                Mode::Sampled => WeightMode::Sampled {
                    shots: args.shots,
                    seed: args.seed,
                },
            };
            fockstate::weights(&state, &group, &rep, mode)?
        }
    };
    if !quiet {
        print_weights(&report);
    }
    emit(&args.output, &serde_json::to_value(&report)?, || {
        io::weights_to_csv(&report)
    })?;
    if args.strict && (report.sum_of_weights - 1.0).abs() > 1e-8 {
        return Err(Failure::Strict(format!(
            "weights sum to {}, not 1",
            report.sum_of_weights
        )));
    }
    Ok(())
}

pub fn reduce(args: &ReduceArgs, quiet: bool) -> CliResult {
    let (group, rep) = inputs::symmetry(&args.sym)?;
    let mut configs = inputs::dets(&args.dets)?;
    if let (Some(from), Some(to)) = (&args.from, &args.to) {
        let shell = |label: &str| {
            rep.shells()
                .iter()
                .find(|s| s.label == label)
                .with_context(|| format!("no shell labelled `{label}`"))
        };
        configs = enumerate_single_excitations(&configs[0], shell(from)?, shell(to)?)?;
    }
    let red: Reduction = reduce_manifold(&configs, &group, &rep)?;
    if !quiet {
        eprintln!("{} configurations reduce over {} to:", configs.len(), group.name);
        for e in &red.entries {
            if clamp(e.total) != 0.0 {
                eprintln!("  {:>6}  total {:.6}  occurs {:.6}", e.irrep, e.total, e.occurrences);
            }
        }
    }
    let value = json!({
        "group": red.group,
        "n_configs": configs.len(),
        "entries": red.entries,
    });
    emit(&args.output, &value, || {
        let mut s = String::from("irrep,total,occurrences,d_gamma\n");
        for e in &red.entries {
            s.push_str(&format!("{},{},{},{}\n", e.irrep, e.total, e.occurrences, e.dim));
        }
        s
    })?;
    Ok(())
}

fn filter_limit() -> usize {
    std::env::var("PSYM_MAX_QUBITS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .map(|q| q / 2)
        .unwrap_or(DEFAULT_FILTER_MAX_SPATIAL)
}

pub fn project(args: &ProjectArgs, quiet: bool) -> CliResult {
    let (group, rep) = inputs::symmetry(&args.sym)?;
    let mut state = inputs::fock(&args.source, args.ucj.as_deref())?;
    state.normalize();
    let ham = match &args.fcidump {
        Some(p) => Some(
            io::read_fcidump(p)
                .with_context(|| format!("reading `{}`", p.display()))?
                .hamiltonian,
        ),
        None => None,
    };
    let (mut projected, norm) = fockstate::project(&state, &group, &rep, &args.irrep)?;
    let zero = norm <= ZERO_NORM;
    let mut energies = serde_json::Map::new();
    let mut filtered_norm = None;
    let mut result: Option<FockState> = None;
    if let Some(h) = &ham {
        energies.insert("original".into(), json!(h.energy(&state)?));
    }
    if !zero {
        projected.normalize();
        if let Some(h) = &ham {
            energies.insert("projected".into(), json!(h.energy(&projected)?));
        }
        result = Some(projected.clone());
        if let (Some(h), Some(cutoff)) = (&ham, args.cutoff) {
            let mut f = filter(&projected, h, cutoff, filter_limit())?;
            let fnorm = f.normalize();
            filtered_norm = Some(fnorm);
            if fnorm > ZERO_NORM {
                energies.insert("filtered".into(), json!(h.energy(&f)?));
                result = Some(f);
            } else {
                result = None;
            }
        }
    }
    if let (Some(path), Some(s)) = (&args.state_out, &result) {
        io::write_wavefunction(path, s, Ordering::Interleaved)
            .with_context(|| format!("writing `{}`", path.display()))?;
    }
    if !quiet {
        eprintln!("projection onto {}: norm {:.10}{}", args.irrep, clamp(norm), if zero { " (zero)" } else { "" });
        for (k, v) in &energies {
            eprintln!("  energy {k:<10} {v}");
        }
    }
    let value = json!({
        "irrep": args.irrep,
        "norm": norm,
        "zero": zero,
        "filtered_norm": filtered_norm,
        "energies": energies,
        "state_written": args.state_out.is_some() && result.is_some(),
    });
    emit(&args.output, &value, || {
        let mut s = String::from("quantity,value\n");
        s.push_str(&format!("norm,{norm}\n"));
        if let Some(f) = filtered_norm {
            s.push_str(&format!("filtered_norm,{f}\n"));
        }
        for (k, v) in &energies {
            s.push_str(&format!("energy_{k},{v}\n"));
        }
        s
    })?;
    if zero && args.strict {
        return Err(Failure::Strict(format!(
            "projection onto {} vanishes (norm {norm:.3e})",
            args.irrep
        )));
    }
    Ok(())
}

fn parse_layers(spec: &str) -> anyhow::Result<Vec<usize>> {
    let mut out = Vec::new();
    for part in spec.split(',') {
        let part = part.trim();
        let parsed = match part.split_once('-') {
            Some((a, b)) => {
                let (a, b): (usize, usize) = (a.trim().parse()?, b.trim().parse()?);
                if a > b {
                    bail!("empty layer range `{part}`");
                }
                (a..=b).collect::<Vec<_>>()
            }
            None => vec![part.parse()?],
        };
        out.extend(parsed);
    }
    if out.contains(&0) || out.is_empty() {
        bail!("layer counts must be positive");
    }
    Ok(out)
}

pub fn compress(args: &CompressArgs, quiet: bool) -> CliResult {
    let target = match (&args.mps, &args.state) {
        (Some(p), _) => inputs::mps(p)?,
        (None, Some(p)) => Mps::from_fock(&inputs::statevector(p)?, usize::MAX)?.0,
        (None, None) => bail_input("no compression target given")?,
    };
    if let Some(path) = &args.circuit {
        let file = io::read_json(path).with_context(|| format!("reading `{}`", path.display()))?;
        let circuit = io::circuit_from_json(&file)?;
        let (inf, trunc) = infidelity(&target, &circuit, args.chi)?;
        if !quiet {
            eprintln!("L = {}: infidelity {inf:.6e}", circuit.n_layers());
        }
        let value = json!({"layers": circuit.n_layers(), "infidelity": inf, "truncation": trunc});
        emit(&args.output, &value, || {
            format!("layers,infidelity\n{},{inf}\n", circuit.n_layers())
        })?;
        return Ok(());
    }
    let layers = parse_layers(&args.layers)?;
    let mut rows = Vec::new();
    let mut best: Option<(f64, psym_core::tncompress::BrickWallCircuit)> = None;
    for &l in &layers {
        let opts = CompressOptions {
            chi: args.chi,
            max_sweeps: args.sweeps,
            restarts: args.restarts,
            init: Init::Random { seed: args.seed },
            ..CompressOptions::new(l)
        };
        let r = run_compress(&target, &opts)?;
        if !quiet {
            eprintln!("L = {l}: best infidelity {:.6e} (restart {}, {} sweeps)", r.infidelity, r.restart, r.sweeps);
        }
        rows.push(json!({
            "layers": l,
            "infidelity": r.infidelity,
            "restart": r.restart,
            "sweeps": r.sweeps,
            "truncation": r.truncation,
        }));
        if best.as_ref().is_none_or(|(b, _)| r.infidelity < *b) {
            best = Some((r.infidelity, r.circuit));
        }
    }
    if let (Some(path), Some((_, c))) = (&args.circuit_out, &best) {
        io::write_json(path, &io::circuit_to_json(c))?;
    }
    let value = json!({ "n_qubits": target.n_sites(), "curve": rows });
    emit(&args.output, &value, || {
        let mut s = String::from("layers,infidelity\n");
        for r in &rows {
            s.push_str(&format!("{},{}\n", r["layers"], r["infidelity"]));
        }
        s
    })?;
    Ok(())
}

fn bail_input<T>(msg: &str) -> CliResult<T> {
    Err(Failure::Input(anyhow::anyhow!("{msg}")))
}

pub fn model(args: &ModelArgs, quiet: bool) -> CliResult {
    let ring = HuckelRing::new(args.n, args.alpha, args.beta)?;
    let group = builtin_group(&args.group)?;
    match group.name.as_str() {
        "D6h" if args.n == 6 => {}
        "D2h" => {}
        name => bail_input(&format!(
            "the ring model supports D6h for N = 6 and D2h for any N, not {name} with N = {}",
            args.n
        ))?,
    }
    let rep = ring.rep_set(&group)?;
    let residual = rep.homomorphism_residual(&group)?;
    if residual > 1e-8 {
        return Err(Failure::Strict(format!(
            "fixture representation fails the homomorphism check ({residual:.3e})"
        )));
    }
    let dir = &args.out_dir;
    fs::create_dir_all(dir).with_context(|| format!("creating `{}`", dir.display()))?;
    io::write_json(&dir.join("group.json"), &io::group_to_json(&group))?;
    io::write_json(&dir.join("rep.json"), &io::rep_to_json(&rep)?)?;
    let occ: Vec<usize> = (0..args.n / 2).collect();
    let hf = SlaterDeterminant::closed_shell(args.n, occ)?;
    io::write_json(&dir.join("hf.json"), &io::dets_to_json(std::slice::from_ref(&hf)))?;
    io::write_wavefunction(&dir.join("hf.bin"), &hf.to_fock(), Ordering::Interleaved)?;
    io::write_fcidump(
        &dir.join("FCIDUMP"),
        &Fcidump {
            hamiltonian: ring.hamiltonian(),
            nelec: args.n,
            ms2: 0,
            orbsym: vec![1; args.n],
            isym: 1,
        },
    )?;
    let c = ring.coefficients();
    let orbitals = json!({
        "n": args.n,
        "alpha": args.alpha,
        "beta": args.beta,
        "energies": ring.orbital_energies(),
        "wavenumbers": ring.wavenumbers(),
        "coefficients": (0..c.nrows()).map(|i| c.row(i).iter().copied().collect::<Vec<f64>>()).collect::<Vec<_>>(),
        "shells": rep.shells().iter().map(|s| json!({
            "label": s.label,
            "orbitals": s.orbitals.iter().map(|p| p + 1).collect::<Vec<_>>(),
        })).collect::<Vec<_>>(),
    });
    io::write_json(&dir.join("orbitals.json"), &orbitals)?;
    if !quiet {
        eprintln!("ring N = {} over {}; files in {}", args.n, group.name, dir.display());
        for (s, e) in rep.shells().iter().map(|s| (s, ring.orbital_energies()[s.orbitals[0]])) {
            eprintln!("  {:>4} x{}  energy {:.6}", s.label, s.orbitals.len(), e);
        }
    }
    Ok(())
}
