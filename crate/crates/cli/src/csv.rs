//! Scan tables as CSV. Column order is part of the file format.

use std::io::{self, Write};

use bellmatch::scan::{CellAngles, Fig2Table, Inequality, InequalityTable};

pub const FIG2_HEADER: &str = "alpha,alpha_prime,beta,n,empirical,theoretical,abs_error";
pub const BELL3_HEADER: &str = "theta_a,theta_ap,theta_b,mode,lhs,bound,violated";
pub const CHSH4_HEADER: &str = "theta_a,theta_ap,theta_b,theta_bp,mode,lhs,bound,violated";

/// Formats with 9 significant digits, like C's `%.9g`.
pub fn sig9(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-5..9).contains(&exp) {
        return format!("{}e{exp}", trim_zeros(mantissa));
    }
    let decimals = (8 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

pub fn write_fig2<W: Write>(out: &mut W, table: &Fig2Table) -> io::Result<()> {
    writeln!(out, "{FIG2_HEADER}")?;
    for r in &table.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            sig9(r.alpha),
            sig9(r.alpha_prime),
            sig9(r.beta),
            r.n,
            sig9(r.empirical),
            sig9(r.theoretical),
            sig9(r.abs_error)
        )?;
    }
    Ok(())
}

pub fn write_inequality<W: Write>(out: &mut W, table: &InequalityTable) -> io::Result<()> {
    let header = match table.grid.inequality() {
        Inequality::Bell3 => BELL3_HEADER,
        Inequality::Chsh4 => CHSH4_HEADER,
    };
    writeln!(out, "{header}")?;
    for r in &table.rows {
        match r.angles {
            CellAngles::Three(c) => write!(
                out,
                "{},{},{},",
                sig9(c.theta_a),
                sig9(c.theta_ap),
                sig9(c.theta_b)
            )?,
            CellAngles::Four(c) => write!(
                out,
                "{},{},{},{},",
                sig9(c.theta_a),
                sig9(c.theta_ap),
                sig9(c.theta_b),
                sig9(c.theta_bp)
            )?,
        }
        writeln!(
            out,
            "{},{},{},{}",
            r.mode,
            sig9(r.lhs),
            sig9(r.bound),
            r.violated
        )?;
    }
    Ok(())
}
