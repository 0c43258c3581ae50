use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use bellmatch::scan::{fig2_scan, inequality_scan, GridSpec, InequalityGrid, InequalityTable};
use bellmatch::{
    bell3_lhs_theory, bell3_sides, chsh4_lhs_theory, chsh4_sides, conditional_corr_estimate,
    corr_aa_matched, corr_apbp_matched, corr_pair, correlation, fraction_positive, match_four,
    match_three, sampler::GEDANKEN_CONSTRUCTION, Mode, PairedRun, Rational, RunSpec, Seed,
};
use num_traits::ToPrimitive;

use crate::args::{
    fig2_axis, full_turn_axis, Bell3Args, CheckArgs, Chsh4Args, Cli, Command, Fig2Args,
    GenerateArgs, Match3Args, Match4Args, ScanCommand,
};
use crate::csv;
use crate::error::CliError;
use crate::record::{self, MatchedQuadFile, MatchedTripleFile};

pub fn run<W: Write>(cli: Cli, out: &mut W) -> Result<(), CliError> {
    let angle = |x: f64| if cli.degrees { x.to_radians() } else { x };
    match cli.command {
        Command::Generate(args) => generate(&args, &angle, out),
        Command::Match3(args) => match3(&args, out),
        Command::Match4(args) => match4(&args, out),
        Command::Scan(ScanCommand::Fig2(args)) => scan_fig2(&args, &angle, out),
        Command::Scan(ScanCommand::Bell3(args)) => scan_bell3(&args, &angle, out),
        Command::Scan(ScanCommand::Chsh4(args)) => scan_chsh4(&args, &angle, out),
        Command::Check(args) => check(&args, out),
    }
}

fn stdout_err(e: std::io::Error) -> CliError {
    CliError::Io(format!("writing output: {e}"))
}

fn f(r: Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

fn generate<W: Write>(
    args: &GenerateArgs,
    angle: &dyn Fn(f64) -> f64,
    out: &mut W,
) -> Result<(), CliError> {
    let spec = RunSpec::new(angle(args.theta_a), angle(args.theta_b), args.n, args.seed);
    let run = bellmatch::sample_pair_run(&spec)?;
    record::write_run(&args.out, &run)?;
    write_run_summary(out, &run).map_err(stdout_err)
}

pub fn write_run_summary<W: Write>(out: &mut W, run: &PairedRun) -> std::io::Result<()> {
    writeln!(out, "n={}", run.len())?;
    writeln!(out, "theta_a={}", run.theta_a)?;
    writeln!(out, "theta_b={}", run.theta_b)?;
    writeln!(
        out,
        "corr_ab={}",
        f(correlation(&run.a, &run.b).expect("equal lengths"))
    )?;
    writeln!(
        out,
        "corr_ab_theory={}",
        corr_pair(run.theta_a - run.theta_b)
    )?;
    writeln!(
        out,
        "fraction_positive_a={}",
        f(fraction_positive(&run.a).expect("non-empty"))
    )?;
    writeln!(
        out,
        "fraction_positive_b={}",
        f(fraction_positive(&run.b).expect("non-empty"))
    )
}

/// Re-derives the comparison from the reported sides instead of trusting a
/// precomputed flag.
pub fn verify_bound(name: &str, lhs: Rational, bound: Rational) -> Result<(), CliError> {
    if lhs <= bound {
        Ok(())
    } else {
        Err(CliError::IdentityViolated(format!(
            "{name}: lhs {lhs} exceeds {bound}"
        )))
    }
}

fn write_report<W: Write>(
    out: &mut W,
    prefix: &str,
    report: &bellmatch::MatchReport,
) -> std::io::Result<()> {
    writeln!(out, "{prefix}requested={}", report.requested)?;
    writeln!(out, "{prefix}matched={}", report.matched)?;
    writeln!(
        out,
        "{prefix}dropped_reference={}",
        report.dropped_reference
    )?;
    writeln!(
        out,
        "{prefix}dropped_candidate={}",
        report.dropped_candidate
    )
}

fn match3<W: Write>(args: &Match3Args, out: &mut W) -> Result<(), CliError> {
    let run_ab = record::read_run(&args.file_ab)?;
    let run_apb = record::read_run(&args.file_apb)?;
    let m = match_three(&run_ab, &run_apb)?;
    record::write_text(&args.out, &record::to_json(&MatchedTripleFile::from(&m)))?;

    // |<AB> - <A'B>| + <AA'> <= 1 is the list identity with B as the shared list
    let sides = bell3_sides(&m.b, &m.a, &m.ap)?;
    let corr_aap = correlation(&m.a, &m.ap)?;
    let lhs = sides.lhs + corr_aap;
    let cfg = m.angles;

    let mut lines = || -> std::io::Result<()> {
        write_report(out, "", &m.report)?;
        writeln!(
            out,
            "corr_ab={}",
            f(correlation(&m.a, &m.b).expect("aligned"))
        )?;
        writeln!(
            out,
            "corr_apb={}",
            f(correlation(&m.ap, &m.b).expect("aligned"))
        )?;
        writeln!(
            out,
            "corr_apb_pretrim={}",
            f(correlation(&run_apb.a, &run_apb.b).expect("run"))
        )?;
        writeln!(out, "corr_aap={}", f(corr_aap))?;
        match conditional_corr_estimate(&m.a, &m.ap, &m.b) {
            Ok(v) => writeln!(out, "corr_aap_conditional={v}")?,
            Err(e) => writeln!(out, "corr_aap_conditional=n/a ({e})")?,
        }
        writeln!(out, "bell3_lhs={lhs}")?;
        writeln!(out, "bell3_lhs_value={}", f(lhs))?;
        writeln!(out, "bell3_bound=1")?;
        writeln!(out, "bell3_holds={}", lhs <= Rational::from_integer(1))?;
        writeln!(
            out,
            "theory_corr_ab={}",
            corr_pair(cfg.theta_a - cfg.theta_b)
        )?;
        writeln!(
            out,
            "theory_corr_apb={}",
            corr_pair(cfg.theta_ap - cfg.theta_b)
        )?;
        writeln!(out, "theory_corr_aap_matched={}", corr_aa_matched(&cfg))?;
        writeln!(
            out,
            "theory_lhs_matched={}",
            bell3_lhs_theory(&cfg, Mode::Matched)
        )?;
        writeln!(
            out,
            "theory_lhs_unmatched_stationary={}",
            bell3_lhs_theory(&cfg, Mode::UnmatchedStationary)
        )
    };
    lines().map_err(stdout_err)?;
    verify_bound("bell3", lhs, Rational::from_integer(1))
}

fn match4<W: Write>(args: &Match4Args, out: &mut W) -> Result<(), CliError> {
    let run_ab = record::read_run(&args.file_ab)?;
    let run_apb = record::read_run(&args.file_apb)?;
    let run_abp = record::read_run(&args.file_abp)?;
    let q = match_four(&run_ab, &run_apb, &run_abp)?;
    record::write_text(&args.out, &record::to_json(&MatchedQuadFile::from(&q)))?;

    let sides = chsh4_sides(&q.a, &q.b, &q.ap, &q.bp)?;
    let cfg = q.angles;
    let mut lines = || -> std::io::Result<()> {
        write_report(out, "stage1_", &q.reports[0])?;
        write_report(out, "stage2_", &q.reports[1])?;
        writeln!(
            out,
            "corr_ab={}",
            f(correlation(&q.a, &q.b).expect("aligned"))
        )?;
        writeln!(
            out,
            "corr_abp={}",
            f(correlation(&q.a, &q.bp).expect("aligned"))
        )?;
        writeln!(
            out,
            "corr_apb={}",
            f(correlation(&q.ap, &q.b).expect("aligned"))
        )?;
        writeln!(
            out,
            "corr_apbp={}",
            f(correlation(&q.ap, &q.bp).expect("aligned"))
        )?;
        writeln!(
            out,
            "corr_apb_pretrim={}",
            f(correlation(&run_apb.a, &run_apb.b).expect("run"))
        )?;
        writeln!(
            out,
            "corr_abp_pretrim={}",
            f(correlation(&run_abp.a, &run_abp.b).expect("run"))
        )?;
        writeln!(out, "chsh4_lhs={}", sides.lhs)?;
        writeln!(out, "chsh4_lhs_value={}", f(sides.lhs))?;
        writeln!(out, "chsh4_bound={}", sides.bound)?;
        writeln!(out, "chsh4_holds={}", sides.lhs <= sides.bound)?;
        writeln!(out, "theory_corr_apbp_matched={}", corr_apbp_matched(&cfg))?;
        writeln!(
            out,
            "theory_lhs_matched={}",
            chsh4_lhs_theory(&cfg, Mode::Matched)
        )?;
        writeln!(
            out,
            "theory_lhs_unmatched_stationary={}",
            chsh4_lhs_theory(&cfg, Mode::UnmatchedStationary)
        )
    };
    lines().map_err(stdout_err)?;
    verify_bound("chsh4", sides.lhs, sides.bound)
}

fn create(path: &Path) -> Result<BufWriter<File>, CliError> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| CliError::io(path, e))
}

pub fn fig2_grid(args: &Fig2Args, angle: &dyn Fn(f64) -> f64) -> GridSpec {
    GridSpec {
        beta: angle(args.beta),
        alpha: args.alpha.axis().resolve(fig2_axis(), angle),
        alpha_prime: args.alpha_prime.axis().resolve(fig2_axis(), angle),
        n_per_cell: args.n,
        seed: Seed(args.seed),
        source: args.source.into(),
    }
}

fn scan_fig2<W: Write>(
    args: &Fig2Args,
    angle: &dyn Fn(f64) -> f64,
    out: &mut W,
) -> Result<(), CliError> {
    let grid = fig2_grid(args, angle);
    // validate before creating the output file
    grid.validate()?;
    let table = fig2_scan(&grid)?;
    let mut file = create(&args.out)?;
    csv::write_fig2(&mut file, &table)
        .and_then(|_| file.flush())
        .map_err(|e| CliError::io(&args.out, e))?;
    let source = match grid.source {
        bellmatch::scan::Fig2Source::Gedanken => GEDANKEN_CONSTRUCTION,
        bellmatch::scan::Fig2Source::MatchedRuns => "matched-runs",
    };
    writeln!(
        out,
        "rows={} rms_error={} max_abs_error={} seed={} source={source}",
        table.rows.len(),
        csv::sig9(table.summary.rms_error),
        csv::sig9(table.summary.max_abs_error),
        grid.seed.0,
    )
    .map_err(stdout_err)
}

pub fn bell3_grid(args: &Bell3Args, angle: &dyn Fn(f64) -> f64) -> InequalityGrid {
    InequalityGrid::Bell3 {
        theta_b: angle(args.theta_b),
        alpha: args.alpha.axis().resolve(full_turn_axis(), angle),
        alpha_prime: args.alpha_prime.axis().resolve(full_turn_axis(), angle),
    }
}

pub fn chsh4_grid(args: &Chsh4Args, angle: &dyn Fn(f64) -> f64) -> InequalityGrid {
    InequalityGrid::Chsh4 {
        theta_a: angle(args.theta_a),
        theta_ap: args.theta_ap.axis().resolve(full_turn_axis(), angle),
        theta_b: args.theta_b.axis().resolve(full_turn_axis(), angle),
        theta_bp: args.theta_bp.axis().resolve(full_turn_axis(), angle),
    }
}

fn write_inequality_scan<W: Write>(
    grid: &InequalityGrid,
    mode: Mode,
    path: &Path,
    out: &mut W,
) -> Result<(), CliError> {
    grid.validate()?;
    let table: InequalityTable = inequality_scan(grid, mode)?;
    let mut file = create(path)?;
    csv::write_inequality(&mut file, &table)
        .and_then(|_| file.flush())
        .map_err(|e| CliError::io(path, e))?;
    writeln!(
        out,
        "rows={} mode={} max_lhs={} bound={} violations={}",
        table.rows.len(),
        mode,
        csv::sig9(table.summary.max_lhs),
        grid.inequality().bound(),
        table.summary.violations
    )
    .map_err(stdout_err)
}

fn scan_bell3<W: Write>(
    args: &Bell3Args,
    angle: &dyn Fn(f64) -> f64,
    out: &mut W,
) -> Result<(), CliError> {
    write_inequality_scan(&bell3_grid(args, angle), args.mode.into(), &args.out, out)
}

fn scan_chsh4<W: Write>(
    args: &Chsh4Args,
    angle: &dyn Fn(f64) -> f64,
    out: &mut W,
) -> Result<(), CliError> {
    write_inequality_scan(&chsh4_grid(args, angle), args.mode.into(), &args.out, out)
}

fn check<W: Write>(args: &CheckArgs, out: &mut W) -> Result<(), CliError> {
    let lists = args
        .paths
        .iter()
        .map(|p| record::read_list(p))
        .collect::<Result<Vec<_>, _>>()?;
    match lists.as_slice() {
        [a, b, bp] => {
            let s = bell3_sides(a, b, bp)?;
            writeln!(
                out,
                "n={}\nlhs={}\nrhs={}\nholds={}",
                a.len(),
                s.lhs,
                s.rhs,
                s.lhs <= s.rhs
            )
            .map_err(stdout_err)?;
            verify_bound("bell3", s.lhs, s.rhs)
        }
        [a, b, ap, bp] => {
            let s = chsh4_sides(a, b, ap, bp)?;
            writeln!(
                out,
                "n={}\nlhs={}\nbound={}\nholds={}",
                a.len(),
                s.lhs,
                s.bound,
                s.lhs <= s.bound
            )
            .map_err(stdout_err)?;
            verify_bound("chsh4", s.lhs, s.bound)
        }
        _ => Err(CliError::Invalid(format!(
            "check takes 3 or 4 list files, got {}",
            lists.len()
        ))),
    }
}
