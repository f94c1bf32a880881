//! Claim builders behind the `build`, `verify` and `report` subcommands.

use std::f64::consts::TAU;

use anyhow::{bail, ensure, Result};
use mubkit::clifford::{
    enumerate_order_n_clifford_subgroups, enumerate_order_n_symplectic_subgroups, SymplecticMatrix,
};
use mubkit::geometry::{
    cubic_sum_dependency, distance_spectrum, haar_average_distance, phase_point_dependencies, separation_candidates,
    separation_survey, CubicClass, SeparationSign,
};
use mubkit::linalg::{Basis, Tolerance};
use mubkit::modring::{is_prime, is_quadratic_residue, Modulus, Residue};
use mubkit::mubs::{
    alltop_fiducial, clifford_orbit_partition, complete_mub_deviation, eigenbasis_correspondence, frame_potential,
    mubs_equal, orbit_bases, orbit_complete_mub, small_dim_orbit_mubs, standard_mub, welch_bound, AlltopParameter,
    CompleteMub,
};
use mubkit::sic3::{shift_direction, sic_deviation, sic_orbit, sic_shift_unitary, ShiftDirection, SicFiducial};
use serde_json::json;

use crate::report::{num, BasisOut, Claim, ClusterOut, Report};

pub const A_UNBIASED: &str = "unbiasedness |<e|f>|^2 = 1/N";
pub const A_WELCH: &str = "frame potential at the Welch bound 2M^2/(N(N+1))";
pub const A_SL2: &str = "|SL(2,Z_N)| = N(N^2-1)";
pub const A_SYMPLECTIC_SUBGROUPS: &str = "N+1 order-N subgroups of SL(2,Z_N)";
pub const A_CLIFFORD_COUNTS: &str =
    "order-N Clifford elements split into Weyl-Heisenberg translates and non-translates";
pub const A_CORRESPONDENCE: &str = "non-translate order-N subgroups <-> orbit bases";
pub const A_WH_STANDARD: &str = "Weyl-Heisenberg subgroups <-> standard bases";
pub const A_OVERLAPPING: &str = "overlapping complete sets: D^2 = (N-1)/N";
pub const A_SEPARATED: &str = "non-overlapping orbit sets: one constant (N-1)/N +- 1/N^2";
pub const A_DESIGN_SUM: &str = "2-design identity: sum of D^2 to a complete set = N";
pub const A_HAAR: &str = "Haar average <D^2> = N/(N+1)";
pub const A_CUBIC_SUM: &str = "cubic exponential sum <u|f_x>";
pub const A_STABILIZER_ORBIT: &str = "stabilizer orbit of the uniform vector";
pub const A_MINUS_THREE: &str = "-3 is a square mod N iff N = 1 mod 3";
pub const A_PHASE_POINT: &str = "parity-invariant standard vectors span (N+1)/2 dimensions";
pub const A_ORBITS: &str = "Clifford orbits of the orbit complete sets";
pub const A_SMALL_DIM: &str = "extraspecial-group orbit complete sets in dimensions 2 and 4";
pub const A_SIC: &str = "SIC condition |<e_i|e_j>|^2 = 1/(N+1)";
pub const A_SIC_SHIFT: &str = "diag(1, sigma^8, sigma^7) shifts phi by 2pi/9";

/// Haar samples for the average-distance estimate.
pub const HAAR_SAMPLES: usize = 10_000;
pub const HAAR_SEED: u64 = 0x6d75_626b;
pub const HAAR_REL_TOL: f64 = 0.02;

#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub tol: Tolerance,
    /// Cap for commands that enumerate the Clifford group or every orbit set.
    pub clifford_cap: usize,
    /// Cap for the remaining verifiers.
    pub dim_cap: usize,
}

fn check_cap(n: usize, cap: usize) -> Result<()> {
    if n > cap {
        return Err(mubkit::Error::DimensionTooLarge { n, cap }.into());
    }
    Ok(())
}

fn odd_prime(n: usize) -> Result<Modulus> {
    ensure!(n > 2 && is_prime(n as u64), "dimension {n} must be an odd prime");
    Ok(Modulus::new(n as u64)?)
}

fn bases_out(m: &CompleteMub) -> Vec<BasisOut> {
    m.bases.iter().map(BasisOut::from_basis).collect()
}

fn complete_claim(id: &str, m: &CompleteMub, cfg: &Config) -> Result<Claim> {
    Ok(Claim::bounded(
        id,
        A_UNBIASED,
        complete_mub_deviation(m)?,
        cfg.tol.eps(),
    ))
}

fn welch_claim(id: &str, m: &CompleteMub) -> Claim {
    let n = m.dim();
    Claim::close(
        id,
        A_WELCH,
        welch_bound(n, m.vectors().count()),
        frame_potential(m),
        1e-8,
    )
}

pub fn build_standard(n: usize, cfg: &Config) -> Result<Report> {
    check_cap(n, cfg.dim_cap)?;
    let m = standard_mub(n)?;
    let mut r = Report::new("build standard", Some(n));
    r.claims.push(complete_claim("standard.complete", &m, cfg)?);
    r.bases = bases_out(&m);
    Ok(r)
}

pub fn build_alltop(n: usize, x: i64, cfg: &Config) -> Result<Report> {
    check_cap(n, cfg.dim_cap)?;
    odd_prime(n)?;
    let x = AlltopParameter::from_ints(x, n as u64)?;
    let m = orbit_complete_mub(x)?;
    let mut r = Report::new("build alltop", Some(n));
    r.claims
        .push(complete_claim(&format!("orbit.x={}.complete", x.value()), &m, cfg)?);
    r.bases = bases_out(&m);
    r.notes = Some(json!({ "x": x.value() }));
    Ok(r)
}

pub fn verify_mub(n: usize, cfg: &Config) -> Result<Report> {
    check_cap(n, cfg.dim_cap)?;
    let mut r = Report::new("verify mub", Some(n));
    let standard = standard_mub(n)?;
    r.claims.push(complete_claim("standard.complete", &standard, cfg)?);
    r.claims.push(welch_claim("standard.frame_potential", &standard));
    let orbit: Vec<(String, CompleteMub)> = match n {
        2 | 4 => small_dim_orbit_mubs(n)?
            .into_iter()
            .map(|om| (format!("orbit.f={}.k={}", om.x, om.anchor), om.mub))
            .collect(),
        _ => AlltopParameter::all(odd_prime(n)?)
            .into_iter()
            .map(|x| Ok((format!("orbit.x={}", x.value()), orbit_complete_mub(x)?)))
            .collect::<Result<_>>()?,
    };
    for (id, m) in &orbit {
        r.claims.push(complete_claim(&format!("{id}.complete"), m, cfg)?);
        r.claims.push(welch_claim(&format!("{id}.frame_potential"), m));
    }
    Ok(r)
}

pub fn verify_counts(n: usize, cfg: &Config) -> Result<Report> {
    let m = odd_prime(n)?;
    check_cap(n, cfg.clifford_cap)?;
    let census = enumerate_order_n_clifford_subgroups(m, cfg.clifford_cap)?;
    let sym = enumerate_order_n_symplectic_subgroups(m);
    let n2 = n * n;
    let mut r = Report::new("verify counts", Some(n));
    r.claims = vec![
        Claim::exact("symplectic_order", A_SL2, n * (n2 - 1), SymplecticMatrix::all(m).len()),
        Claim::exact("symplectic_subgroups", A_SYMPLECTIC_SUBGROUPS, n + 1, sym.len()),
        Claim::exact(
            "order_n_elements",
            A_CLIFFORD_COUNTS,
            n2 * (n2 - 1),
            census.order_n_elements,
        ),
        Claim::exact("translates", A_CLIFFORD_COUNTS, n * (n2 - 1), census.translate_elements),
        Claim::exact(
            "non_translates",
            A_CLIFFORD_COUNTS,
            n * (n - 1) * (n2 - 1),
            census.non_translate_elements,
        ),
        Claim::exact(
            "translate_subgroups",
            A_CLIFFORD_COUNTS,
            n * (n + 1),
            census.translate_subgroups.len(),
        ),
        Claim::exact(
            "subgroups",
            A_CLIFFORD_COUNTS,
            n * (n2 - 1),
            census.non_translate_subgroups.len(),
        ),
        Claim::exact("wh_subgroups", A_WH_STANDARD, n + 1, census.wh_subgroups),
        Claim::exact(
            "total_non_wh_subgroups",
            A_CLIFFORD_COUNTS,
            n2 * (n + 1),
            census.total_subgroups(),
        ),
    ];
    Ok(r)
}

pub fn verify_correspondence(n: usize, cfg: &Config) -> Result<Report> {
    odd_prime(n)?;
    check_cap(n, cfg.clifford_cap)?;
    let rep = eigenbasis_correspondence(n, cfg.clifford_cap, cfg.tol)?;
    let expected = n * (n * n - 1);
    let mut r = Report::new("verify correspondence", Some(n));
    r.claims = vec![
        Claim::exact("subgroups", A_CORRESPONDENCE, expected, rep.subgroups),
        Claim::exact("orbit_bases", A_CORRESPONDENCE, expected, rep.orbit_bases),
        Claim::exact("matched", A_CORRESPONDENCE, expected, rep.matches.len()),
        Claim::exact("degenerate", A_CORRESPONDENCE, 0, rep.degenerate.len()),
        Claim::exact("bijective", A_CORRESPONDENCE, true, rep.is_bijective()),
        Claim::bounded("eigenbasis_match", A_CORRESPONDENCE, rep.max_deviation, cfg.tol.eps()),
        Claim::exact("wh_standard", A_WH_STANDARD, true, rep.wh_matches_standard),
        Claim::exact("standard_disjoint", A_CORRESPONDENCE, true, rep.standard_disjoint),
    ];
    Ok(r)
}

pub fn verify_distances(n: usize, cfg: &Config) -> Result<Report> {
    odd_prime(n)?;
    check_cap(n, cfg.clifford_cap)?;
    let eps = cfg.tol.eps();
    let survey = separation_survey(n, cfg.clifford_cap, cfg.tol)?;
    let nf = n as f64;
    let (plus, minus) = separation_candidates(n);
    let mut r = Report::new("verify distances", Some(n));

    let expected_overlap = (nf - 1.0) / nf;
    r.claims.push(Claim::bounded(
        "overlapping.constant",
        A_OVERLAPPING,
        survey.overlapping.max_deviation_from(expected_overlap),
        eps,
    ));
    let c2 = survey.non_overlapping.single_value();
    r.claims.push(Claim::exact(
        "non_overlapping.clusters",
        A_SEPARATED,
        1,
        survey.non_overlapping.clusters.len(),
    ));
    let measured = c2.unwrap_or(f64::NAN);
    let spread = c2.map_or(f64::INFINITY, |v| survey.non_overlapping.max_deviation_from(v));
    r.claims
        .push(Claim::bounded("non_overlapping.spread", A_SEPARATED, spread, eps));
    let sign = match survey.sign {
        SeparationSign::Plus => "+",
        SeparationSign::Minus => "-",
        SeparationSign::Neither => "neither",
    };
    r.claims.push(Claim {
        id: "non_overlapping.sign".into(),
        anchor: A_SEPARATED.into(),
        expected: json!({ "plus": num(plus), "minus": num(minus) }),
        measured: json!({ "value": num(measured), "matches": sign }),
        max_deviation: crate::report::round12((measured - plus).abs().min((measured - minus).abs())),
        pass: survey.sign != SeparationSign::Neither,
    });
    r.claims.push(Claim::bounded(
        "design_sum",
        A_DESIGN_SUM,
        survey.design_sum_deviation,
        eps,
    ));

    let haar = haar_average_distance(n, HAAR_SAMPLES, HAAR_SEED)?;
    let want = nf / (nf + 1.0);
    r.claims
        .push(Claim::close("haar_average", A_HAAR, want, haar, HAAR_REL_TOL * want));

    let mut all: Vec<Basis> = standard_mub(n)?.bases;
    all.extend(orbit_bases(n, cfg.clifford_cap)?);
    let spectrum = distance_spectrum(&all)?;
    let values: Vec<f64> = spectrum.clusters.iter().map(|c| c.value).collect();
    let mut want_values = vec![expected_overlap, measured, 1.0];
    want_values.sort_by(f64::total_cmp);
    let dev = if values.len() == 3 {
        values
            .iter()
            .zip(&want_values)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    r.claims.push(Claim {
        id: "spectrum".into(),
        anchor: A_OVERLAPPING.into(),
        expected: json!(want_values.iter().map(|v| num(*v)).collect::<Vec<_>>()),
        measured: json!(values.iter().map(|v| num(*v)).collect::<Vec<_>>()),
        max_deviation: crate::report::round12(dev),
        pass: dev <= 1e-6,
    });
    r.clusters = spectrum
        .clusters
        .iter()
        .map(|c| ClusterOut {
            value: crate::report::round12(c.value),
            count: c.count,
        })
        .collect();
    Ok(r)
}

pub fn verify_dependencies(n: usize, x: Option<i64>, cfg: &Config) -> Result<Report> {
    let m = odd_prime(n)?;
    check_cap(n, cfg.dim_cap)?;
    let mut r = Report::new("verify dependencies", Some(n));
    let pp = phase_point_dependencies(n, cfg.tol)?;
    r.claims.push(Claim::exact(
        "phase_point.invariant",
        A_PHASE_POINT,
        n + 1,
        pp.invariant.len(),
    ));
    r.claims
        .push(Claim::exact("phase_point.rank", A_PHASE_POINT, n.div_ceil(2), pp.rank));
    if n < 5 {
        return Ok(r);
    }
    let qr = is_quadratic_residue(Residue::new(-3, n as u64)?)?;
    r.claims
        .push(Claim::exact("minus_three_residue", A_MINUS_THREE, n % 3 == 1, qr));
    let xs = match x {
        Some(x) => vec![AlltopParameter::from_ints(x, n as u64)?],
        None => AlltopParameter::all(m),
    };
    for x in xs {
        let rep = cubic_sum_dependency(x, cfg.tol)?;
        let id = format!("x={}", x.value());
        r.claims.push(Claim::exact(
            &format!("{id}.distinct_bases"),
            A_STABILIZER_ORBIT,
            true,
            rep.distinct_bases(),
        ));
        match rep.class {
            CubicClass::TwoModThree => {
                r.claims.push(Claim::bounded(
                    &format!("{id}.cubic_sum"),
                    A_CUBIC_SUM,
                    rep.overlap.norm(),
                    cfg.tol.eps(),
                ));
                r.claims.push(Claim::bounded(
                    &format!("{id}.orthogonal"),
                    A_STABILIZER_ORBIT,
                    rep.max_overlap,
                    cfg.tol.eps(),
                ));
                r.claims.push(Claim {
                    id: format!("{id}.rank"),
                    anchor: A_STABILIZER_ORBIT.into(),
                    expected: json!(format!("<= {}", n - 1)),
                    measured: json!(rep.rank),
                    max_deviation: 0.0,
                    pass: rep.rank < n,
                });
            }
            CubicClass::OneModThree => {
                let o = rep.overlap.norm();
                r.claims.push(Claim {
                    id: format!("{id}.cubic_sum"),
                    anchor: A_CUBIC_SUM.into(),
                    expected: json!("> 1e-3"),
                    measured: num(o),
                    max_deviation: 0.0,
                    pass: o > 1e-3,
                });
            }
        }
    }
    Ok(r)
}

/// `(N^2 - 1)/3` in three orbits when cubing is 3-to-1 on units, one orbit
/// of `N^2 - 1` otherwise.
pub fn expected_partition(n: usize) -> Vec<usize> {
    let total = n * n - 1;
    if n % 3 == 1 {
        vec![total / 3; 3]
    } else {
        vec![total]
    }
}

pub fn verify_orbits(n: usize, cfg: &Config) -> Result<Report> {
    odd_prime(n)?;
    check_cap(n, cfg.clifford_cap)?;
    let sizes = clifford_orbit_partition(n, cfg.clifford_cap, cfg.tol)?;
    let mut r = Report::new("verify orbits", Some(n));
    r.claims.push(Claim::exact(
        "partition",
        A_ORBITS,
        expected_partition(n),
        sizes.clone(),
    ));
    r.claims.push(Claim::exact(
        "covered",
        A_ORBITS,
        n * n - 1,
        sizes.iter().sum::<usize>(),
    ));
    Ok(r)
}

pub fn verify_smalldim(n: usize, cfg: &Config) -> Result<Report> {
    if n != 2 && n != 4 {
        bail!("verify smalldim takes --dim 2 or 4, got {n}");
    }
    let sets = small_dim_orbit_mubs(n)?;
    let mut r = Report::new("verify smalldim", Some(n));
    r.claims.push(Claim::exact(
        "count",
        A_SMALL_DIM,
        if n == 2 { 3 } else { 10 },
        sets.len(),
    ));
    let mut worst: f64 = 0.0;
    let mut distinct = true;
    for (i, a) in sets.iter().enumerate() {
        worst = worst.max(complete_mub_deviation(&a.mub)?);
        r.claims.push(welch_claim(
            &format!("f={}.k={}.frame_potential", a.x, a.anchor),
            &a.mub,
        ));
        distinct &= sets[i + 1..].iter().all(|b| !mubs_equal(&a.mub, &b.mub, cfg.tol));
    }
    r.claims
        .push(Claim::bounded("complete", A_UNBIASED, worst, cfg.tol.eps()));
    r.claims
        .push(Claim::exact("pairwise_distinct", A_SMALL_DIM, true, distinct));
    let standard = standard_mub(n)?;
    r.claims.push(complete_claim("standard.complete", &standard, cfg)?);
    Ok(r)
}

/// `k`-th of `grid` uniform angles in `[0, 2 pi)`.
fn grid_angle(k: usize, grid: usize) -> f64 {
    TAU * k as f64 / grid as f64
}

pub fn verify_sic(grid: usize, cfg: &Config) -> Result<Report> {
    ensure!(grid > 0, "--grid must be positive");
    let mut r = Report::new("verify sic", Some(3));
    let mut worst: f64 = 0.0;
    for k in 0..grid {
        worst = worst.max(sic_deviation(&sic_orbit(SicFiducial::new(grid_angle(k, grid))))?);
    }
    r.claims.push(Claim::bounded("grid", A_SIC, worst, cfg.tol.eps()));

    let mut directions = Vec::new();
    for k in 0..10 {
        let phi = 0.05 + grid_angle(k, 10);
        directions.push(shift_direction(SicFiducial::new(phi), cfg.tol)?);
    }
    let label = |d: &ShiftDirection| match d {
        ShiftDirection::Plus => "+",
        ShiftDirection::Minus => "-",
        ShiftDirection::Both => "both",
        ShiftDirection::Neither => "neither",
    };
    let first = directions[0];
    let consistent = directions.iter().all(|d| *d == first);
    r.claims.push(Claim {
        id: "shift_direction".into(),
        anchor: A_SIC_SHIFT.into(),
        expected: json!("one of +, - for every sampled phi"),
        measured: json!(label(&first)),
        max_deviation: 0.0,
        pass: consistent && matches!(first, ShiftDirection::Plus | ShiftDirection::Minus),
    });

    let u = sic_shift_unitary();
    let f2 = alltop_fiducial(AlltopParameter::from_ints(2, 3)?)?;
    let diag_dev = (0..3)
        .map(|a| (u[(a, a)] - f2[a] * 3f64.sqrt()).norm())
        .fold(0.0, f64::max);
    r.claims.push(Claim::bounded(
        "diagonal_is_cubic_fiducial",
        A_SIC_SHIFT,
        diag_dev,
        cfg.tol.eps(),
    ));
    let order_dev = u.pow(9).max_abs_diff(&mubkit::linalg::CMatrix::identity(3));
    r.claims
        .push(Claim::bounded("order_nine", A_SIC_SHIFT, order_dev, cfg.tol.eps()));
    r.notes = Some(json!({ "grid": grid, "sampled_phi": 10 }));
    Ok(r)
}

/// Every applicable verifier for each dimension, claims prefixed by `dN`.
pub fn report_all(dims: &[usize], grid: usize, cfg: &Config) -> Result<Report> {
    let mut r = Report::new("report all", None);
    let mut absorb = |prefix: String, sub: Report| {
        r.claims.extend(sub.claims.into_iter().map(|c| {
            let section = sub.command.trim_start_matches("verify ").to_string();
            c.prefixed(&format!("{prefix}.{section}"))
        }));
    };
    for &n in dims {
        let p = format!("d{n}");
        absorb(p.clone(), verify_mub(n, cfg)?);
        if n == 2 || n == 4 {
            absorb(p.clone(), verify_smalldim(n, cfg)?);
            continue;
        }
        odd_prime(n)?;
        absorb(p.clone(), verify_dependencies(n, None, cfg)?);
        if n <= cfg.clifford_cap {
            absorb(p.clone(), verify_counts(n, cfg)?);
            absorb(p.clone(), verify_correspondence(n, cfg)?);
            absorb(p.clone(), verify_distances(n, cfg)?);
            absorb(p.clone(), verify_orbits(n, cfg)?);
        }
    }
    absorb("d3".into(), verify_sic(grid, cfg)?);
    Ok(r)
}
