//! CSV writers and gnuplot scripts for every diagram.
//!
//! Floating-point fields use 17 significant digits so files can be
//! re-analysed without loss. Data files always hold the true zero-harmonic
//! amplitude; only the plot scripts cap it.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use crate::analysis::{poincare_points, Spectrum};
use crate::config::RunConfig;
use crate::integrator::StroboSeries;
use crate::sweep::{IcMapResult, SweepResult};

/// Amplitudes below this are left out of `spectrum_sweep.csv`.
pub const SPECTRUM_SWEEP_FLOOR: f64 = 1e-12;

/// 17 significant digits.
pub fn num(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_series<W: Write>(w: &mut W, s: &StroboSeries) -> io::Result<()> {
    writeln!(w, "n,tau,alpha_out,theta_out")?;
    for (n, ((a, t), tau)) in s.alpha_out.iter().zip(&s.theta_out).zip(&s.tau).enumerate() {
        writeln!(w, "{n},{},{},{}", num(*tau), num(*a), num(*t))?;
    }
    Ok(())
}

pub fn write_bifurcation<W: Write>(w: &mut W, r: &SweepResult) -> io::Result<()> {
    writeln!(w, "param,alpha_out")?;
    for (p, a) in r.bifurcation_points() {
        writeln!(w, "{},{}", num(p), num(a))?;
    }
    Ok(())
}

/// One line per axis value; failed rows read `failed,0,nan`.
pub fn write_classes<W: Write>(w: &mut W, r: &SweepResult) -> io::Result<()> {
    writeln!(w, "param,class,period,entropy")?;
    for row in &r.rows {
        match row.data() {
            Some(d) => writeln!(
                w,
                "{},{},{},{}",
                num(row.param),
                d.class.kind,
                d.class.period,
                num(d.entropy.entropy)
            )?,
            None => writeln!(w, "{},failed,0,nan", num(row.param))?,
        }
    }
    Ok(())
}

pub fn write_spectrum<W: Write>(w: &mut W, s: &Spectrum) -> io::Result<()> {
    writeln!(w, "k,amplitude")?;
    for (k, a) in s.amplitudes.iter().enumerate() {
        writeln!(w, "{k},{}", num(*a))?;
    }
    Ok(())
}

pub fn write_spectrum_sweep<W: Write>(w: &mut W, r: &SweepResult) -> io::Result<()> {
    writeln!(w, "param,k,amplitude")?;
    for row in &r.rows {
        if let Some(d) = row.data() {
            for (k, &a) in d.spectrum.amplitudes.iter().enumerate() {
                if a >= SPECTRUM_SWEEP_FLOOR {
                    writeln!(w, "{},{k},{}", num(row.param), num(a))?;
                }
            }
        }
    }
    Ok(())
}

pub fn write_entropy<W: Write>(w: &mut W, r: &SweepResult) -> io::Result<()> {
    writeln!(w, "param,entropy")?;
    for (p, e) in r.entropies() {
        writeln!(w, "{},{}", num(p), num(e))?;
    }
    Ok(())
}

pub fn write_icmap<W: Write>(w: &mut W, r: &IcMapResult) -> io::Result<()> {
    writeln!(w, "alpha0,theta0,class,period,entropy")?;
    for row in &r.rows {
        match &row.outcome {
            Ok((c, e)) => writeln!(
                w,
                "{},{},{},{},{}",
                num(row.alpha0),
                num(row.theta0),
                c.kind,
                c.period,
                num(e.entropy)
            )?,
            Err(_) => writeln!(w, "{},{},failed,0,nan", num(row.alpha0), num(row.theta0))?,
        }
    }
    Ok(())
}

pub fn write_poincare<W: Write>(w: &mut W, s: &StroboSeries) -> io::Result<()> {
    writeln!(w, "alpha_out,theta_out")?;
    for (a, t) in poincare_points(s) {
        writeln!(w, "{},{}", num(a), num(t))?;
    }
    Ok(())
}

/// Computed result of one CLI command.
#[derive(Debug, Clone)]
pub enum Outcome {
    Series(StroboSeries),
    Bifurcation(SweepResult),
    Spectrum { series: StroboSeries, spectrum: Spectrum },
    SpectrumSweep(SweepResult),
    Entropy(SweepResult),
    IcMap(IcMapResult),
    Poincare(StroboSeries),
}

fn create(dir: &Path, name: &str, written: &mut Vec<PathBuf>) -> io::Result<io::BufWriter<fs::File>> {
    let path = dir.join(name);
    let f = fs::File::create(&path)?;
    written.push(path);
    Ok(io::BufWriter::new(f))
}

fn gnuplot_header(title: &str, png: &str) -> String {
    format!(
        "# gnuplot script; run with `gnuplot {png}.gp` from this directory\n\
         set datafile separator ','\n\
         set terminal pngcairo size 900,600\n\
         set output '{png}.png'\n\
         set title '{title}'\n\
         set key off\n"
    )
}

/// Plot cap for the zero harmonic: a little above the largest other one.
fn dc_cap(max_harmonic: f64) -> f64 {
    if max_harmonic > 0.0 {
        1.2 * max_harmonic
    } else {
        1.0
    }
}

/// Write the CSV files for `outcome` (plus plot scripts when requested)
/// and the resolved configuration into `cfg.output_dir`.
pub fn write_outputs(outcome: &Outcome, cfg: &RunConfig) -> io::Result<Vec<PathBuf>> {
    let dir = cfg.output_dir.as_path();
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();
    let mut scripts: Vec<(String, String)> = Vec::new();
    let axis_label = |r: &SweepResult| r.axis.to_string();

    match outcome {
        Outcome::Series(s) => {
            write_series(&mut create(dir, "series.csv", &mut written)?, s)?;
            scripts.push((
                "series".into(),
                gnuplot_header("stroboscopic outlet conversion", "series")
                    + "set xlabel 'n'\nset ylabel 'alpha_out'\n\
                       plot 'series.csv' every ::1 using 1:3 with points pt 7 ps 0.4\n",
            ));
        }
        Outcome::Bifurcation(r) => {
            write_bifurcation(&mut create(dir, "bifurcation.csv", &mut written)?, r)?;
            write_classes(&mut create(dir, "classes.csv", &mut written)?, r)?;
            scripts.push((
                "bifurcation".into(),
                gnuplot_header("bifurcation diagram", "bifurcation")
                    + &format!(
                        "set xlabel '{}'\nset ylabel 'alpha_out'\n\
                         plot 'bifurcation.csv' every ::1 using 1:2 with dots lc rgb 'black'\n",
                        axis_label(r)
                    ),
            ));
        }
        Outcome::Spectrum { series, spectrum } => {
            write_spectrum(&mut create(dir, "spectrum.csv", &mut written)?, spectrum)?;
            write_series(&mut create(dir, "series.csv", &mut written)?, series)?;
            let cap = dc_cap(spectrum.max_harmonic());
            scripts.push((
                "spectrum".into(),
                gnuplot_header("amplitude spectrum (zero harmonic capped)", "spectrum")
                    + &format!(
                        "cap = {}\nset xlabel 'k'\nset ylabel '|X[k]|'\nset yrange [0:cap]\n\
                         plot 'spectrum.csv' every ::1 using 1:($2 > cap ? cap : $2) with impulses\n",
                        num(cap)
                    ),
            ));
        }
        Outcome::SpectrumSweep(r) => {
            write_spectrum_sweep(&mut create(dir, "spectrum_sweep.csv", &mut written)?, r)?;
            write_classes(&mut create(dir, "classes.csv", &mut written)?, r)?;
            let max_h = r
                .rows
                .iter()
                .filter_map(|row| row.data())
                .map(|d| d.spectrum.max_harmonic())
                .fold(0.0, f64::max);
            scripts.push((
                "spectrum_sweep".into(),
                gnuplot_header("harmonics versus parameter (zero harmonic capped)", "spectrum_sweep")
                    + &format!(
                        "cap = {}\nset xlabel '{}'\nset ylabel '|X[k]|'\nset yrange [0:cap]\n\
                         plot 'spectrum_sweep.csv' every ::1 using 1:($3 > cap ? cap : $3) with dots\n",
                        num(dc_cap(max_h)),
                        axis_label(r)
                    ),
            ));
        }
        Outcome::Entropy(r) => {
            write_entropy(&mut create(dir, "entropy.csv", &mut written)?, r)?;
            write_classes(&mut create(dir, "classes.csv", &mut written)?, r)?;
            scripts.push((
                "entropy".into(),
                gnuplot_header("information entropy", "entropy")
                    + &format!(
                        "set xlabel '{}'\nset ylabel 'E [bit]'\n\
                         plot 'entropy.csv' every ::1 using 1:2 with linespoints pt 7 ps 0.3\n",
                        axis_label(r)
                    ),
            ));
        }
        Outcome::IcMap(r) => {
            write_icmap(&mut create(dir, "icmap.csv", &mut written)?, r)?;
            scripts.push((
                "icmap".into(),
                gnuplot_header("initial conditions leading to periodic solutions", "icmap")
                    + "set xlabel 'alpha(xi,0)'\nset ylabel 'theta(xi,0)'\n\
                       plot 'icmap.csv' every ::1 using 1:(strcol(3) eq 'aperiodic' || strcol(3) eq 'failed' ? NaN : $2) with points pt 7 ps 0.5\n",
            ));
        }
        Outcome::Poincare(s) => {
            write_poincare(&mut create(dir, "poincare.csv", &mut written)?, s)?;
            scripts.push((
                "poincare".into(),
                gnuplot_header("Poincare section", "poincare")
                    + "set xlabel 'alpha_out'\nset ylabel 'theta_out'\n\
                       plot 'poincare.csv' every ::1 using 1:2 with points pt 7 ps 0.3\n",
            ));
        }
    }

    if cfg.emit_plots {
        for (name, body) in scripts {
            let path = dir.join(format!("{name}.gp"));
            fs::write(&path, body)?;
            written.push(path);
        }
    }
    let path = dir.join("config.resolved");
    fs::write(&path, cfg.to_config_string())?;
    written.push(path);
    Ok(written)
}
