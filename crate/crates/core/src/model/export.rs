//! LP and fixed-field MPS writers. Output depends only on the model, so
//! identical models give identical bytes.

use std::fmt::Write as _;

use super::{LinearModel, ModelError, Sense, Tag};

const LP_WRAP: usize = 80;

fn lp_term(out: &mut String, line_len: &mut usize, first: bool, coef: f64, body: &str) {
    let mut piece = String::new();
    let sign = if coef < 0.0 { "-" } else { "+" };
    let mag = coef.abs();
    if first && coef >= 0.0 {
        // no leading sign
    } else {
        piece.push_str(sign);
        piece.push(' ');
    }
    if mag != 1.0 {
        write!(piece, "{mag} ").unwrap();
    }
    piece.push_str(body);
    if *line_len + piece.len() + 1 > LP_WRAP && *line_len > 0 {
        out.push_str("\n   ");
        *line_len = 3;
    } else if !first {
        out.push(' ');
        *line_len += 1;
    }
    *line_len += piece.len();
    out.push_str(&piece);
}

/// CPLEX LP format. Rows carry a `\ tag:` comment whenever the provenance
/// tag changes; bilinear objective terms go in a bracketed `[ ... ] / 2`
/// block with doubled coefficients.
pub fn export_lp(model: &LinearModel) -> String {
    let mut out = String::new();
    writeln!(out, "\\ Problem: {}", model.name).unwrap();
    out.push_str("Minimize\n obj: ");
    let mut len = 6;
    let mut first = true;
    for &(v, c) in &model.objective {
        lp_term(&mut out, &mut len, first, c, &v.to_string());
        first = false;
    }
    if !model.bilinear.is_empty() {
        if first {
            out.push_str("0 ");
            first = false;
        }
        out.push_str(" + [ ");
        len += 5;
        let mut inner_first = true;
        for &(a, b, c) in &model.bilinear {
            lp_term(&mut out, &mut len, inner_first, 2.0 * c, &format!("{a} * {b}"));
            inner_first = false;
        }
        out.push_str(" ] / 2");
    }
    if first {
        out.push('0');
    }
    out.push_str("\nSubject To\n");

    let mut last_tag: Option<Tag> = None;
    for (k, row) in model.constraints.iter().enumerate() {
        if last_tag != Some(row.tag) {
            writeln!(out, "\\ tag: {}", row.tag).unwrap();
            last_tag = Some(row.tag);
        }
        let label = format!(" {}_{}: ", row.tag.as_str().replace('-', "_"), k + 1);
        out.push_str(&label);
        let mut len = label.len();
        if row.terms.is_empty() {
            write!(out, "0 {}", model.vars[0].id).unwrap();
        }
        for (t, &(v, c)) in row.terms.iter().enumerate() {
            lp_term(&mut out, &mut len, t == 0, c, &v.to_string());
        }
        writeln!(out, " {} {}", row.sense.symbol(), row.rhs).unwrap();
    }

    out.push_str("Bounds\n");
    for v in model.vars.iter().filter(|v| !v.integer || v.lb != 0.0 || v.ub != 1.0) {
        if v.lb == v.ub {
            writeln!(out, " {} = {}", v.id, v.lb).unwrap();
        } else {
            writeln!(out, " {} <= {} <= {}", v.lb, v.id, v.ub).unwrap();
        }
    }
    let binaries: Vec<String> = model
        .vars
        .iter()
        .filter(|v| v.integer && v.lb == 0.0 && v.ub == 1.0)
        .map(|v| v.id.to_string())
        .collect();
    if !binaries.is_empty() {
        out.push_str("Binaries\n");
        for chunk in binaries.chunks(8) {
            writeln!(out, " {}", chunk.join(" ")).unwrap();
        }
    }
    let generals: Vec<String> = model
        .vars
        .iter()
        .filter(|v| v.integer && !(v.lb == 0.0 && v.ub == 1.0))
        .map(|v| v.id.to_string())
        .collect();
    if !generals.is_empty() {
        out.push_str("Generals\n");
        for chunk in generals.chunks(8) {
            writeln!(out, " {}", chunk.join(" ")).unwrap();
        }
    }
    out.push_str("End\n");
    out
}

/// Shortest representation of `v` that fits a 12-character MPS field.
fn mps_number(v: f64) -> String {
    let s = format!("{v}");
    if s.len() <= 12 {
        return s;
    }
    for prec in (0..=11).rev() {
        let s = format!("{v:.prec$e}");
        if s.len() <= 12 {
            return s;
        }
    }
    unreachable!("finite f64 always fits 12 characters in scientific form")
}

fn mps_name(s: String) -> Result<String, ModelError> {
    if s.len() > 8 {
        Err(ModelError::MpsName(s))
    } else {
        Ok(s)
    }
}

/// Fixed-field line: field 1 at column 2, field 2 at 5, field 3 at 15,
/// field 4 at 25, field 5 at 40, field 6 at 50 (one-based columns).
fn mps_line(out: &mut String, fields: [&str; 6]) {
    const START: [usize; 6] = [1, 4, 14, 24, 39, 49];
    let mut line = String::new();
    for (f, &col) in fields.iter().zip(&START) {
        if f.is_empty() {
            continue;
        }
        while line.len() < col {
            line.push(' ');
        }
        line.push_str(f);
    }
    out.push_str(line.trim_end());
    out.push('\n');
}

/// Fixed-field MPS. Row names are `R` plus a seven-digit index; columns use
/// the LP names and must fit eight characters. Bilinear objective terms go
/// to a `QUADOBJ` section (upper triangle, coefficients doubled).
pub fn export_mps(model: &LinearModel) -> Result<String, ModelError> {
    let mut out = String::new();
    writeln!(out, "NAME          {}", model.name).unwrap();
    out.push_str("ROWS\n");
    mps_line(&mut out, ["N", "OBJ", "", "", "", ""]);
    let row_names: Vec<String> = (0..model.constraints.len()).map(|k| format!("R{:07}", k + 1)).collect();
    for (row, name) in model.constraints.iter().zip(&row_names) {
        let kind = match row.sense {
            Sense::Le => "L",
            Sense::Eq => "E",
            Sense::Ge => "G",
        };
        mps_line(&mut out, [kind, name, "", "", "", ""]);
    }

    let names: Vec<String> = model
        .vars
        .iter()
        .map(|v| mps_name(v.id.to_string()))
        .collect::<Result<_, _>>()?;
    let mut column_entries: Vec<Vec<(&str, f64)>> = vec![Vec::new(); model.vars.len()];
    for &(v, c) in &model.objective {
        column_entries[model.var_index(v).expect("declared")].push(("OBJ", c));
    }
    for (row, name) in model.constraints.iter().zip(&row_names) {
        for &(v, c) in &row.terms {
            column_entries[model.var_index(v).expect("declared")].push((name, c));
        }
    }

    out.push_str("COLUMNS\n");
    let mut in_int = false;
    let mut marker = 0;
    for (k, var) in model.vars.iter().enumerate() {
        if var.integer != in_int {
            let m = format!("M{marker:07}");
            marker += 1;
            let kind = if var.integer { "'INTORG'" } else { "'INTEND'" };
            mps_line(&mut out, ["", &m, "'MARKER'", "", kind, ""]);
            in_int = var.integer;
        }
        if column_entries[k].is_empty() {
            // keep the column declared
            mps_line(&mut out, ["", &names[k], "OBJ", "0", "", ""]);
        }
        for &(row, c) in &column_entries[k] {
            mps_line(&mut out, ["", &names[k], row, &mps_number(c), "", ""]);
        }
    }
    if in_int {
        let m = format!("M{marker:07}");
        mps_line(&mut out, ["", &m, "'MARKER'", "", "'INTEND'", ""]);
    }

    out.push_str("RHS\n");
    for (row, name) in model.constraints.iter().zip(&row_names) {
        if row.rhs != 0.0 {
            mps_line(&mut out, ["", "RHS", name, &mps_number(row.rhs), "", ""]);
        }
    }

    out.push_str("BOUNDS\n");
    for (var, name) in model.vars.iter().zip(&names) {
        if var.integer && var.lb == 0.0 && var.ub == 1.0 {
            mps_line(&mut out, ["BV", "BND", name, "", "", ""]);
        } else if var.lb == var.ub {
            mps_line(&mut out, ["FX", "BND", name, &mps_number(var.lb), "", ""]);
        } else {
            if var.lb != 0.0 {
                mps_line(&mut out, ["LO", "BND", name, &mps_number(var.lb), "", ""]);
            }
            mps_line(&mut out, ["UP", "BND", name, &mps_number(var.ub), "", ""]);
        }
    }

    if !model.bilinear.is_empty() {
        out.push_str("QUADOBJ\n");
        let mut entries: Vec<(usize, usize, f64)> = model
            .bilinear
            .iter()
            .map(|&(a, b, c)| {
                let (ia, ib) = (model.var_index(a).expect("declared"), model.var_index(b).expect("declared"));
                (ia.min(ib), ia.max(ib), c)
            })
            .collect();
        entries.sort_by_key(|e| (e.0, e.1));
        for (a, b, c) in entries {
            mps_line(&mut out, ["", &names[a], &names[b], &mps_number(c), "", ""]);
        }
    }
    out.push_str("ENDATA\n");
    Ok(out)
}
