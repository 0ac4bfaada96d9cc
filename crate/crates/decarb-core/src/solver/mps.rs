//! Fixed-format MPS writer.
//!
//! Variable and row names are mangled to `C0000001` / `R0000001` so every
//! name fits the 8-character fixed-format field; the original names are
//! returned alongside as a two-column CSV map. Binaries are emitted as `BV`
//! bounds, so no INTORG markers are needed.

use crate::milp::MilpProblem;

/// An exported model: the MPS text plus the short-name/long-name map.
#[derive(Debug, Clone)]
pub struct MpsExport {
    pub mps: String,
    /// CSV with header `mps_name,name`, one line per row and column.
    pub name_map: String,
}

/// Format a value so it fits the 12-character fixed-format value field.
fn fmt_value(v: f64) -> String {
    let s = format!("{v}");
    if s.len() <= 12 {
        s
    } else {
        format!("{v:.6e}")
    }
}

fn push_fields(out: &mut String, f1: &str, f2: &str, f3: &str, f4: &str) {
    // Fixed-format field starts: 2, 5, 15, 25.
    out.push(' ');
    out.push_str(f1);
    for _ in f1.len()..3 {
        out.push(' ');
    }
    out.push_str(f2);
    if !f3.is_empty() {
        for _ in f2.len()..10 {
            out.push(' ');
        }
        out.push_str(f3);
        if !f4.is_empty() {
            for _ in f3.len()..10 {
                out.push(' ');
            }
            out.push_str(f4);
        }
    }
    out.push('\n');
}

/// Render `problem` as fixed-format MPS with a stable name-mangling map.
pub fn export_mps(problem: &MilpProblem) -> MpsExport {
    let col_name = |j: usize| format!("C{:07}", j + 1);
    let row_name = |r: usize| format!("R{:07}", r + 1);

    let mut mps = String::new();
    mps.push_str("NAME          DECARB\n");

    mps.push_str("ROWS\n");
    push_fields(&mut mps, "N", "OBJ", "", "");
    for (r, row) in problem.constraints.iter().enumerate() {
        push_fields(&mut mps, &row.relation.mps_tag().to_string(), &row_name(r), "", "");
    }

    // Column-major coefficient lists.
    let n = problem.num_vars();
    let mut entries: Vec<Vec<(usize, f64)>> = vec![Vec::new(); n];
    for (r, row) in problem.constraints.iter().enumerate() {
        for &(j, a) in &row.coeffs {
            entries[j].push((r, a));
        }
    }

    mps.push_str("COLUMNS\n");
    for j in 0..n {
        let name = col_name(j);
        if problem.objective[j] != 0.0 {
            push_fields(&mut mps, "", &name, "OBJ", &fmt_value(problem.objective[j]));
        }
        for &(r, a) in &entries[j] {
            push_fields(&mut mps, "", &name, &row_name(r), &fmt_value(a));
        }
        if problem.objective[j] == 0.0 && entries[j].is_empty() {
            // Keep the column visible to the reader even when empty.
            push_fields(&mut mps, "", &name, "OBJ", "0");
        }
    }

    mps.push_str("RHS\n");
    for (r, row) in problem.constraints.iter().enumerate() {
        if row.rhs != 0.0 {
            push_fields(&mut mps, "", "RHS", &row_name(r), &fmt_value(row.rhs));
        }
    }

    mps.push_str("RANGES\n");

    mps.push_str("BOUNDS\n");
    for j in 0..n {
        let name = col_name(j);
        let lo = problem.lower[j];
        let hi = problem.upper[j];
        let is_int = problem.integer[j];
        if is_int && lo == 0.0 && hi == 1.0 {
            push_fields(&mut mps, "BV", "BND", &name, "");
            continue;
        }
        if lo == hi {
            push_fields(&mut mps, "FX", "BND", &name, &fmt_value(lo));
            continue;
        }
        match (lo.is_finite(), hi.is_finite()) {
            (false, false) => push_fields(&mut mps, "FR", "BND", &name, ""),
            (true, false) => {
                if lo != 0.0 {
                    let tag = if is_int { "LI" } else { "LO" };
                    push_fields(&mut mps, tag, "BND", &name, &fmt_value(lo));
                }
            }
            (false, true) => {
                push_fields(&mut mps, "MI", "BND", &name, "");
                let tag = if is_int { "UI" } else { "UP" };
                push_fields(&mut mps, tag, "BND", &name, &fmt_value(hi));
            }
            (true, true) => {
                push_fields(&mut mps, if is_int { "LI" } else { "LO" }, "BND", &name, &fmt_value(lo));
                push_fields(&mut mps, if is_int { "UI" } else { "UP" }, "BND", &name, &fmt_value(hi));
            }
        }
    }

    mps.push_str("ENDATA\n");

    let mut name_map = String::from("mps_name,name\n");
    for (r, row) in problem.constraints.iter().enumerate() {
        name_map.push_str(&format!("{},{}\n", row_name(r), row.name));
    }
    for (j, name) in problem.var_names.iter().enumerate() {
        name_map.push_str(&format!("{},{}\n", col_name(j), name));
    }

    MpsExport { mps, name_map }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::milp::{ProblemBuilder, Relation};

    #[test]
    fn binaries_become_bv_bounds() {
        let mut b = ProblemBuilder::new();
        let x = b.add_var("x", 0.0, 1.0, true, 3.0);
        let y = b.add_var("y", 0.0, 1.0, true, 2.0);
        b.add_row("cover", vec![(x, 1.0), (y, 1.0)], Relation::Ge, 1.5);
        let export = export_mps(&b.finish());
        let bv_lines = export.mps.lines().filter(|l| l.trim_start().starts_with("BV")).count();
        assert_eq!(bv_lines, 2);
        assert!(export.mps.contains("ENDATA"));
        assert!(export.name_map.contains("C0000001,x"));
        assert!(export.name_map.contains("R0000001,cover"));
    }

    #[test]
    fn empty_constraint_set_is_valid() {
        let mut b = ProblemBuilder::new();
        b.add_var("x", 0.0, 5.0, false, 1.0);
        let export = export_mps(&b.finish());
        let rows_section: Vec<&str> = export
            .mps
            .lines()
            .skip_while(|l| !l.starts_with("ROWS"))
            .take_while(|l| !l.starts_with("COLUMNS"))
            .collect();
        // Only the section header and the objective row.
        assert_eq!(rows_section.len(), 2);
        assert!(rows_section[1].contains("OBJ"));
    }

    #[test]
    fn all_names_fit_fixed_format() {
        let mut b = ProblemBuilder::new();
        for i in 0..300 {
            b.add_var(format!("a_very_long_variable_name_{i}"), 0.0, 1.0, false, 1.0);
        }
        b.add_row("row_with_a_long_name", vec![(0, 1.0)], Relation::Le, 1.0);
        let export = export_mps(&b.finish());
        for line in export.name_map.lines().skip(1) {
            let short = line.split(',').next().unwrap();
            assert!(short.len() <= 8, "{short}");
        }
    }

    #[test]
    fn values_fit_in_twelve_chars() {
        assert!(fmt_value(0.123456789123456789).len() <= 12);
        assert!(fmt_value(-123456789.123).len() <= 12);
        assert!(fmt_value(1e-30).len() <= 12);
        assert_eq!(fmt_value(26.7), "26.7");
    }
}
