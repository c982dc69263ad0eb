//! Graphviz and JSON renderings of a resolution tree.

use std::fmt::Write;

use serde::ser::{Serialize, SerializeStruct, Serializer};

use super::{LocalChart, Node, ResolutionTree};

impl ResolutionTree {
    /// Dual graph in DOT, one node `E_i (a/b) N=..` per divisor.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("graph resolution {\n");
        for n in &self.nodes {
            let mut label = format!("E_{} ({}/{})", n.id, n.weight.a, n.weight.b);
            if let Some(big_n) = n.n {
                let _ = write!(label, " N={big_n}");
            }
            let _ = writeln!(out, "  E{} [label=\"{label}\"];", n.id);
        }
        for (i, j) in self.edges() {
            let _ = writeln!(out, "  E{i} -- E{j};");
        }
        out.push_str("}\n");
        out
    }
}

#[derive(serde::Serialize)]
struct ChartRecord {
    x: String,
    y: String,
}

impl From<&LocalChart> for ChartRecord {
    fn from(c: &LocalChart) -> Self {
        ChartRecord { x: c.x.to_string(), y: c.y.to_string() }
    }
}

impl Serialize for Node {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let kind = match self.parents.len() {
            0 => "root",
            1 => "free",
            _ => "satellite",
        };
        let mut st = s.serialize_struct("Node", 8)?;
        st.serialize_field("id", &self.id)?;
        st.serialize_field("a", &self.weight.a)?;
        st.serialize_field("b", &self.weight.b)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("kind", kind)?;
        st.serialize_field("parents", &self.parents)?;
        st.serialize_field("center", &ChartRecord::from(&self.center))?;
        st.serialize_field("chart", &ChartRecord::from(&self.chart))?;
        st.end()
    }
}

impl Serialize for ResolutionTree {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ResolutionTree", 3)?;
        st.serialize_field("field", &self.field.to_string())?;
        st.serialize_field("nodes", &self.nodes)?;
        st.serialize_field("edges", &self.edges())?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use crate::arith::Field;
    use crate::poly::parse_poly;
    use crate::resolution::resolve_curve;

    #[test]
    fn cusp_dot() {
        let t = resolve_curve(&parse_poly("y^2 - x^3", Field::Rational).unwrap()).unwrap();
        let dot = t.to_dot();
        assert!(dot.contains("E2 [label=\"E_2 (5/2) N=6\"]"));
        assert!(dot.contains("E0 -- E2;") && dot.contains("E1 -- E2;") && !dot.contains("E0 -- E1;"));
    }
}
