//! Human-readable rendering of a [`Report`].

use std::fmt::Write;

use crate::report::{Item, Report, Results};

fn checks(out: &mut String, items: &[Item]) {
    for i in items {
        let _ = write!(out, "  [{}] {}", if i.passed { "pass" } else { "FAIL" }, i.name);
        if let Some(d) = &i.detail {
            let _ = write!(out, "  ({d})");
        }
        out.push('\n');
    }
}

fn table(out: &mut String, header: &[String], rows: &[(String, Vec<String>)]) {
    let first = rows.iter().map(|(l, _)| l.chars().count()).max().unwrap_or(0);
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for (_, cells) in rows {
        for (w, c) in widths.iter_mut().zip(cells) {
            *w = (*w).max(c.chars().count());
        }
    }
    let pad = |s: &str, w: usize| format!("{s}{}", " ".repeat(w.saturating_sub(s.chars().count())));
    let _ = write!(out, "  {}", pad("", first));
    for (h, w) in header.iter().zip(&widths) {
        let _ = write!(out, "  {}", pad(h, *w));
    }
    out.push('\n');
    for (label, cells) in rows {
        let _ = write!(out, "  {}", pad(label, first));
        for (c, w) in cells.iter().zip(&widths) {
            let _ = write!(out, "  {}", pad(c, *w));
        }
        out.push('\n');
    }
}

pub fn render(r: &Report) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "cosym3 {} :: {} {} (dim {}, {})",
        r.command, r.input.source, r.input.name, r.input.dim, r.input.topology
    );
    let _ = writeln!(out, "verdict: {}", r.verdict);
    match &r.results {
        Results::Check(c) => {
            let _ = writeln!(out, "{} identities, {} failed", c.checks.len(), c.failures);
            checks(&mut out, &c.checks);
        }
        Results::Betti(b) => {
            let join = |v: &[usize]| v.iter().map(ToString::to_string).collect::<Vec<_>>().join(", ");
            let _ = writeln!(out, "b  = [{}]", join(&b.b));
            let _ = writeln!(out, "bh = [{}]", join(&b.bh));
            let _ = writeln!(out, "decomposition dims:");
            let rows: Vec<(String, Vec<String>)> = b
                .decomposition
                .iter()
                .enumerate()
                .map(|(k, row)| (format!("k={k}"), row.iter().map(ToString::to_string).collect()))
                .collect();
            table(&mut out, &b.epsilon_order, &rows);
            for n in &b.notes {
                let _ = writeln!(out, "note: {n}");
            }
            let _ = writeln!(out, "{} checks, {} failed", b.checks.len(), b.failures);
            checks(&mut out, &b.checks);
        }
        Results::Deform(d) => {
            let _ = writeln!(out, "a = {}", d.a);
            let _ = writeln!(out, "identical to input: {}", d.identical_to_input);
            if let Some(p) = &d.output {
                let _ = writeln!(out, "written to {p}");
            }
            let _ = writeln!(out, "{} identities, {} failed", d.checks.len(), d.failures);
            checks(&mut out, &d.checks);
        }
        Results::Liealg(l) => {
            let _ = writeln!(out, "module dimension {}", l.module_dim);
            let _ = writeln!(
                out,
                "bracket-closed span dimension {} (generators closed: {})",
                l.span_dim, l.generators_closed
            );
            let _ = writeln!(
                out,
                "Killing form rank {}, signature ({}+, {}-, {} zero)",
                l.killing_rank, l.signature.positive, l.signature.negative, l.signature.zero
            );
            let _ = writeln!(out, "bracket table [row, column]:");
            let rows: Vec<(String, Vec<String>)> = l
                .generators
                .iter()
                .cloned()
                .zip(l.bracket_table.iter().cloned())
                .collect();
            table(&mut out, &l.generators, &rows);
            let _ = writeln!(out, "{} checks, {} failed", l.checks.len(), l.failures);
            checks(&mut out, &l.checks);
        }
    }
    let _ = writeln!(out, "conventions:");
    for c in &r.conventions {
        let _ = writeln!(out, "  {c}");
    }
    out
}
