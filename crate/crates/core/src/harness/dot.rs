//! Graphviz export: cycles as coloured edge sets, bridges dashed,
//! generators filled.

use std::collections::{BTreeSet, HashMap};
use std::fmt::Write as _;

use num::ToPrimitive;

use crate::algebra::extract_generators;
use crate::complex::{CellComplex, Edge};

const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b", "#e377c2",
];

pub fn export_dot(c: &CellComplex) -> String {
    let mut colour: HashMap<Edge, &str> = HashMap::new();
    for (i, cy) in c.cycles().iter().enumerate() {
        for (a, b) in cy.edges() {
            if let Ok(e) = Edge::new(a, b) {
                colour.entry(e).or_insert(PALETTE[i % PALETTE.len()]);
            }
        }
    }
    let bridges: BTreeSet<&Edge> = c.ribbons().iter().flat_map(|r| r.bridges()).collect();
    let generators: BTreeSet<String> = c
        .ribbons()
        .iter()
        .flat_map(|r| extract_generators(r).as_slice().to_vec())
        .collect();

    let mut out = String::new();
    writeln!(out, "graph \"{}\" {{", c.name).unwrap();
    writeln!(out, "  node [shape=circle, fontsize=10, width=0.3];").unwrap();
    for v in c.vertices() {
        let x = v.position.x.0.to_f64().unwrap_or(0.0);
        let y = v.position.y.0.to_f64().unwrap_or(0.0);
        let fill = if generators.contains(&v.id) {
            ", style=filled, fillcolor=gold"
        } else {
            ""
        };
        writeln!(out, "  \"{}\" [pos=\"{x},{y}!\"{fill}];", v.id).unwrap();
    }
    for e in c.edges() {
        let (a, b) = e.endpoints();
        let mut attrs = Vec::new();
        if let Some(col) = colour.get(e) {
            attrs.push(format!("color=\"{col}\""));
        }
        if bridges.contains(e) {
            attrs.push("style=dashed".to_string());
        }
        if attrs.is_empty() {
            writeln!(out, "  \"{a}\" -- \"{b}\";").unwrap();
        } else {
            writeln!(out, "  \"{a}\" -- \"{b}\" [{}];", attrs.join(", ")).unwrap();
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::generate::{generate_ribbon_complex, GenConfig};

    #[test]
    fn bridges_are_dashed_and_generators_filled() {
        let cfg = GenConfig {
            seed: 5,
            ribbons: 1..=1,
            bridges: 1..=1,
            intersections: 1..=1,
            ..GenConfig::default()
        };
        let c = generate_ribbon_complex(&cfg).unwrap();
        let dot = export_dot(&c);
        assert!(dot.starts_with("graph \"generated_5\" {"));
        assert_eq!(dot.matches("style=dashed").count(), 1);
        assert_eq!(dot.matches("fillcolor=gold").count(), 3);
        assert_eq!(dot.matches(" -- ").count(), c.edges().len());
    }
}
