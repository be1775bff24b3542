use std::fmt::Write as _;

use nmorse::NormalizedFunction;

fn quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

/// Hasse diagram of the field with `cell:h` labels. Critical cells get a
/// double border, matched pairs a bold arrow from the upper cell down to
/// its partner, every other incidence a plain arrow upwards.
pub fn export_dot(h: &NormalizedFunction<'_>) -> String {
    let field = h.field();
    let k = field.complex();
    let mut out = String::from("digraph field {\n  rankdir=BT;\n  node [shape=ellipse];\n");
    for c in k.cell_ids() {
        let label = quote(&format!("{}:{}", k.cell_name(c), h.value(c)));
        if field.is_critical(c) {
            let _ = writeln!(out, "  c{} [label={label}, peripheries=2];", c.0);
        } else {
            let _ = writeln!(out, "  c{} [label={label}];", c.0);
        }
    }
    for c in k.cell_ids() {
        for inc in k.faces(c) {
            let face = inc.cell;
            if field.is_matched_pair(face, c) {
                let _ = writeln!(out, "  c{} -> c{} [style=bold];", c.0, face.0);
            } else {
                let _ = writeln!(out, "  c{} -> c{};", face.0, c.0);
            }
        }
    }
    out.push_str("}\n");
    out
}
