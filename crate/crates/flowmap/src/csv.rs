//! CSV artifacts. Each starts with the provenance comment line, then a
//! header row. Floats use the shortest text that parses back exactly.

use std::fmt::Write;

use flowmap_core::analysis::{ThresholdSetReport, TifdField, TripCurve};
use flowmap_core::steane::{McTrip, PseudothresholdFit};
use flowmap_core::FailureVector;

use crate::provenance::Provenance;

/// Shortest round-trip decimal form.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

fn start(p: &Provenance, header: &str) -> String {
    let mut s = p.comment_line();
    s.push_str(header);
    s.push('\n');
    s
}

pub fn trip(p: &Provenance, curves: &[TripCurve]) -> String {
    let mut s = start(p, "gamma,level,value");
    for c in curves {
        for &(g, v) in &c.samples {
            let _ = writeln!(s, "{},{},{}", num(g), c.level, num(v));
        }
    }
    s
}

pub fn tifd(p: &Provenance, f: &TifdField) -> String {
    let mut s = start(p, "x,y,dx,dy,magnitude");
    for a in &f.arrows {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            num(a.x),
            num(a.y),
            num(a.dx),
            num(a.dy),
            num(a.magnitude)
        );
    }
    s
}

pub fn threshold_set(p: &Provenance, r: &ThresholdSetReport) -> String {
    let mut s = start(p, "x,y,class");
    for (iy, &y) in r.y_nodes.iter().enumerate() {
        for (ix, &x) in r.x_nodes.iter().enumerate() {
            let _ = writeln!(s, "{},{},{}", num(x), num(y), r.class(ix, iy).as_str());
        }
    }
    s
}

pub fn mc_trip(p: &Provenance, t: &McTrip) -> String {
    let mut s = start(p, "gamma,trials,failures,p_hat,stderr");
    for (g, e) in t.gammas.iter().zip(&t.estimates) {
        let _ = writeln!(
            s,
            "{},{},{},{},{}",
            num(*g),
            e.trials,
            e.failures,
            num(e.p_hat),
            num(e.stderr)
        );
    }
    s
}

pub fn mc_fit(p: &Provenance, model: &str, f: &PseudothresholdFit) -> String {
    let mut s = start(p, "model,points,c2,c3,value,stderr,ci_lo,ci_hi");
    let _ = writeln!(
        s,
        "{model},{},{},{},{},{},{},{}",
        f.points,
        num(f.c2),
        num(f.c3),
        num(f.value),
        num(f.stderr),
        num(f.ci.0),
        num(f.ci.1)
    );
    s
}

/// Free-form table: the header row and pre-rendered cells.
pub fn table(p: &Provenance, header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = start(p, &header.join(","));
    for r in rows {
        s.push_str(&r.join(","));
        s.push('\n');
    }
    s
}

/// `level,<var>…` rows of an orbit.
pub fn trajectory(p: &Provenance, orbit: &[FailureVector]) -> String {
    let names = orbit
        .first()
        .map(|v| v.names().join(","))
        .unwrap_or_default();
    let mut s = start(p, &format!("level,{names}"));
    for (l, v) in orbit.iter().enumerate() {
        let cells: Vec<String> = v.values().iter().map(|&x| num(x)).collect();
        let _ = writeln!(s, "{l},{}", cells.join(","));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip() {
        for x in [0.0, 0.2, 1e-6, 0.246_421_946_784_583_2, 1.0 / 3.0] {
            assert_eq!(num(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(num(0.2), "0.2");
    }
}
