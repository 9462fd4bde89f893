use graphene_landau::landau::{self, valley_spectrum, valley_state, LandauLevel, LevelKind};
use graphene_landau::lattice::{high_symmetry_path, scan_bands, Valley};
use graphene_landau::perturb::{
    crossed_field_first_order, crossed_field_spectrum, landau_matrix_element, CrossedFieldSpec, FactorOrder,
    PerturbationSpec,
};
use graphene_landau::units::LatticeParams;
use graphene_landau::validate::run_all;
use graphene_landau::zetahall::{
    auto_n_max, build_spectrum_table, hall_conductivity_thermal, hall_curve, plateau_edges, reduced,
};
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::output::{Cell, Table};
use crate::Context;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] graphene_landau::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("validation failed: {0}")]
    Validation(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use graphene_landau::Error as E;
        match self {
            CliError::Usage(_) | CliError::Io(_) => 1,
            CliError::Core(E::Config { .. } | E::InvalidParameter(_)) => 1,
            CliError::Core(E::Domain(_) | E::Numerical(_)) => 2,
            CliError::Validation(_) => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(e) => e.kind(),
            CliError::Io(_) => "io",
            CliError::Validation(_) => "validation",
        }
    }
}

fn grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>, CliError> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(CliError::Usage(format!("range [{lo}, {hi}] must be finite and ordered")));
    }
    if points == 0 {
        return Err(CliError::Usage("point count must be >= 1".into()));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    Ok((0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect())
}

fn level_ids(kind: LevelKind) -> (i64, i64) {
    match kind {
        LevelKind::ZeroMode => (0, 0),
        LevelKind::Pair { n, s } => (n as i64, s as i64),
    }
}

fn valley_name(v: Valley) -> &'static str {
    match v {
        Valley::K => "K",
        Valley::KPrime => "Kp",
    }
}

pub fn bands(ctx: &Context, per_segment: usize) -> Result<Table, CliError> {
    if per_segment == 0 {
        return Err(CliError::Usage("--per-segment must be >= 1".into()));
    }
    let lp = ctx.params.as_ref().map(|p| p.lattice).unwrap_or_else(LatticeParams::graphene);
    let path = high_symmetry_path(per_segment);
    let mut t = Table::new(&["index", "k1_inv_a", "k2_inv_a", "e_plus_eV", "e_minus_eV"]);
    for (i, row) in scan_bands(&path, &lp).into_iter().enumerate() {
        t.push(vec![Cell::Int(i as i64), row.k.k1.into(), row.k.k2.into(), row.e_plus.into(), row.e_minus.into()]);
    }
    Ok(t)
}

pub fn free_dispersion(ctx: &Context, k_max: f64, points: usize) -> Result<Table, CliError> {
    let z = ctx.z()?;
    let eps = ctx.eps_b_ev()?;
    let ks = grid(0.0, k_max, points)?;
    let mut cols = vec!["k_inv_lB", "e_plus_epsB", "e_minus_epsB"];
    if eps.is_some() {
        cols.extend(["e_plus_eV", "e_minus_eV"]);
    }
    let mut t = Table::new(&cols);
    for k in ks {
        // internal units: mass z, v_F = 1
        let [plus, minus] = landau::free_dispersion([k, 0.0], z, 1.0);
        let mut row = vec![k.into(), plus.energy.into(), minus.energy.into()];
        if let Some(e) = eps {
            row.extend([Cell::Real(plus.energy * e), Cell::Real(minus.energy * e)]);
        }
        t.push(row);
    }
    Ok(t)
}

fn level_table(levels: &[LandauLevel], eps: Option<f64>) -> Table {
    let mut cols = vec!["valley", "n", "s", "energy_epsB"];
    if eps.is_some() {
        cols.push("energy_eV");
    }
    let mut t = Table::new(&cols);
    for l in levels {
        let (n, s) = level_ids(l.kind);
        let mut row = vec![valley_name(l.valley).into(), n.into(), s.into(), l.energy.into()];
        if let Some(e) = eps {
            row.push(Cell::Real(l.energy * e));
        }
        t.push(row);
    }
    t
}

pub fn spectrum(ctx: &Context, n_max: usize) -> Result<Table, CliError> {
    let z = ctx.z()?;
    let mut levels = valley_spectrum(Valley::K, n_max, z)?;
    levels.extend(valley_spectrum(Valley::KPrime, n_max, z)?);
    Ok(level_table(&levels, ctx.eps_b_ev()?))
}

pub fn hall(ctx: &Context, mu_min: f64, mu_max: f64, points: usize, beta: Option<f64>) -> Result<Table, CliError> {
    let z = ctx.z()?;
    let eps = ctx.eps_b_ev()?;
    let mus = grid(mu_min, mu_max, points)?;
    let table = build_spectrum_table(z, auto_n_max(mu_min.abs().max(mu_max.abs()), z)?)?;
    let sigma = match beta {
        None => hall_curve(&table, &mus)?.sigma_xy,
        Some(b) => mus
            .par_iter()
            .map(|&mu| hall_conductivity_thermal(&table, mu, b))
            .collect::<Result<Vec<f64>, _>>()?,
    };
    let mut cols = vec!["mu_epsB"];
    if eps.is_some() {
        cols.push("mu_eV");
    }
    cols.extend(["sigma_e2_over_h", "reduced"]);
    let mut t = Table::new(&cols);
    for (mu, s) in mus.iter().zip(&sigma) {
        let mut row = vec![Cell::Real(*mu)];
        if let Some(e) = eps {
            row.push(Cell::Real(mu * e));
        }
        row.extend([Cell::Real(*s), Cell::Real(reduced(*s))]);
        t.push(row);
    }
    let edges: Vec<_> = plateau_edges(&table, mu_min, mu_max)?
        .into_iter()
        .map(|e| {
            let (n, s) = level_ids(e.level.kind);
            json!({
                "energy_epsB": e.energy,
                "valley": valley_name(e.level.valley),
                "n": n,
                "s": s,
                "reduced_below": e.reduced_below,
                "reduced_above": e.reduced_above,
            })
        })
        .collect();
    t.extra.insert("plateau_edges".into(), json!(edges));
    t.extra.insert("n_max".into(), json!(table.n_max));
    Ok(t)
}

fn parse_orders(spec: &str) -> Result<Vec<FactorOrder>, CliError> {
    if spec == "all" {
        return Ok(FactorOrder::all());
    }
    FactorOrder::all()
        .into_iter()
        .find(|o| o.label() == spec)
        .map(|o| vec![o])
        .ok_or_else(|| CliError::Usage(format!("unknown factor order {spec:?}; use e.g. q.B.I.S or all")))
}

pub fn perturb_check(ctx: &Context, n_max: usize, order: &str, diagonal: bool) -> Result<Table, CliError> {
    let z = ctx.z()?;
    let orders = parse_orders(order)?;
    // physical prefactor when the lattice and field are known, else 1
    let strength = match &ctx.params {
        Some(p) if ctx.z.is_none() => {
            let l_b = p.model()?.l_b_m()?;
            PerturbationSpec::from_lattice(p.lattice.a, l_b, FactorOrder::paper())?.strength
        }
        _ => 1.0,
    };
    let mut kinds = vec![LevelKind::ZeroMode];
    for n in 0..=n_max {
        kinds.extend([LevelKind::Pair { n, s: 1 }, LevelKind::Pair { n, s: -1 }]);
    }
    let states = kinds
        .iter()
        .map(|&k| valley_state(Valley::K, k, 0.0, z))
        .collect::<Result<Vec<_>, _>>()?;
    let mut jobs = Vec::new();
    for o in &orders {
        for (i, ket) in states.iter().enumerate() {
            for (j, bra) in states.iter().enumerate() {
                if !diagonal || i == j {
                    jobs.push((*o, bra, ket));
                }
            }
        }
    }
    let elements = jobs
        .par_iter()
        .map(|(o, bra, ket)| landau_matrix_element(bra, ket, &PerturbationSpec::new(strength, *o)?))
        .collect::<Result<Vec<_>, _>>()?;

    let mut t = Table::new(&["order", "n", "s", "n_prime", "s_prime", "value_re", "value_im", "natural_scale"]);
    for ((o, bra, ket), me) in jobs.iter().zip(&elements) {
        let (n, s) = level_ids(ket.kind);
        let (np, sp) = level_ids(bra.kind);
        t.push(vec![
            Cell::Text(o.label()),
            n.into(),
            s.into(),
            np.into(),
            sp.into(),
            me.value.re.into(),
            me.value.im.into(),
            me.natural_scale.into(),
        ]);
    }
    t.extra.insert("strength_epsB".into(), json!(strength));
    Ok(t)
}

pub fn crossed(ctx: &Context, e_over_vfb: Option<f64>, k: f64, n_max: usize) -> Result<Table, CliError> {
    let z = ctx.z()?;
    let eps = ctx.eps_b_ev()?;
    let r = match (e_over_vfb, &ctx.params) {
        (Some(r), _) => r,
        (None, Some(p)) => p.model()?.e_over_vfb()?,
        (None, None) => return Err(CliError::Usage("crossed needs --e-over-vfb or E_voltperm in --config".into())),
    };
    let cf = CrossedFieldSpec::new(r, k, z)?;
    if !cf.is_perturbative() {
        eprintln!("warning: |E/(v_F B)| = {} is outside the perturbative range", r.abs());
    }
    let mut kinds = vec![LevelKind::ZeroMode];
    for n in 0..=n_max {
        kinds.extend([LevelKind::Pair { n, s: 1 }, LevelKind::Pair { n, s: -1 }]);
    }
    let mut cols = vec!["n", "s", "unshifted_epsB", "shift_epsB", "energy_epsB", "first_order_epsB"];
    if eps.is_some() {
        cols.push("energy_eV");
    }
    let mut t = Table::new(&cols);
    for kind in kinds {
        let level = crossed_field_spectrum(kind, &cf, z)?;
        let first = crossed_field_first_order(&valley_state(Valley::K, kind, k, z)?, &cf)?;
        let (n, s) = level_ids(kind);
        let mut row = vec![
            n.into(),
            s.into(),
            level.unshifted.into(),
            level.shift.into(),
            level.energy.into(),
            first.into(),
        ];
        if let Some(e) = eps {
            row.push(Cell::Real(level.energy * e));
        }
        t.push(row);
    }
    t.extra.insert("crossed_field".into(), json!(cf));
    Ok(t)
}

/// The table and whether any criterion failed.
pub fn validate() -> (Table, bool) {
    let reports = run_all();
    let mut t = Table::new(&["criterion", "passed", "checks", "failures", "elapsed_s", "title"]);
    for r in &reports {
        eprintln!("{}", r.summary_line());
        t.push(vec![
            Cell::Int(r.id as i64),
            Cell::Int(r.passed() as i64),
            Cell::Int(r.checks.len() as i64),
            Cell::Int(r.failures().len() as i64),
            Cell::Real(r.elapsed_s),
            r.title.into(),
        ]);
    }
    t.extra.insert("reports".into(), json!(reports));
    (t, reports.iter().any(|r| !r.passed()))
}
