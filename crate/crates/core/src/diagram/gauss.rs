//! Diagrams from signed Gauss codes.
//!
//! A component is a list of crossing visits: `k` passes over crossing `k`,
//! `-k` passes under it. Crossing signs are given separately. The planar
//! embedding is the one forced by the code; non-planar codes are rejected
//! by validation.

use super::{Diagram, DiagramError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GaussComponent {
    pub open: bool,
    pub visits: Vec<i32>,
}

impl GaussComponent {
    pub fn open(visits: &[i32]) -> Self {
        GaussComponent { open: true, visits: visits.to_vec() }
    }

    pub fn closed(visits: &[i32]) -> Self {
        GaussComponent { open: false, visits: visits.to_vec() }
    }
}

/// Text form of the diagram; `signs[k-1]` is the sign of crossing `k`.
/// Open component `i` gets tail `2i-1` and head `2i`.
pub fn gauss_to_text(components: &[GaussComponent], signs: &[i32]) -> String {
    let n = signs.len();
    // (in segment, out segment) of under and over passes per crossing
    let mut under = vec![(0u64, 0u64); n];
    let mut over = vec![(0u64, 0u64); n];
    let mut lines = vec!["surface S2".to_string()];
    let mut next = 1u64;
    let mut ends = Vec::new();
    let mut label = 1u32;
    for c in components {
        let k = c.visits.len();
        if k == 0 {
            if c.open {
                lines.push(format!("T {next} {label}"));
                ends.push(format!("H {next} {}", label + 1));
                label += 2;
            } else {
                lines.push(format!("O {next}"));
            }
            next += 1;
            continue;
        }
        let first = next;
        let segs = if c.open { k + 1 } else { k };
        next += segs as u64;
        let seg = |i: usize| first + (i % segs) as u64;
        for (i, &v) in c.visits.iter().enumerate() {
            let x = v.unsigned_abs() as usize - 1;
            let pass = (seg(i), seg(i + 1));
            if v > 0 {
                over[x] = pass;
            } else {
                under[x] = pass;
            }
        }
        if c.open {
            lines.push(format!("T {first} {label}"));
            ends.push(format!("H {} {}", first + k as u64, label + 1));
            label += 2;
        }
    }
    for x in 0..n {
        let (a, c) = under[x];
        let (oi, oo) = over[x];
        let (b, d) = if signs[x] > 0 { (oo, oi) } else { (oi, oo) };
        let s = if signs[x] > 0 { '+' } else { '-' };
        lines.push(format!("X {a} {b} {c} {d} {s}"));
    }
    lines.extend(ends);
    lines.join("\n") + "\n"
}

pub fn from_gauss(components: &[GaussComponent], signs: &[i32]) -> Result<Diagram, DiagramError> {
    Diagram::parse(&gauss_to_text(components, signs))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trefoil_from_gauss() {
        let d = from_gauss(&[GaussComponent::closed(&[1, -2, 3, -1, 2, -3])], &[1, 1, 1]).unwrap();
        assert_eq!(d.writhe(), 3);
        assert_eq!(d.crossing_count(), 3);
    }

    #[test]
    fn non_planar_code_rejected() {
        assert!(from_gauss(&[GaussComponent::closed(&[1, -2, -1, 2])], &[1, 1]).is_err());
    }

    #[test]
    fn knotoid_from_gauss() {
        let d = from_gauss(&[GaussComponent::open(&[1, -2, -1, 2])], &[1, -1]);
        // open codes of this shape embed; the writhe is the sign sum
        if let Ok(d) = d {
            assert_eq!(d.writhe(), 0);
            assert_eq!(d.open_count(), 1);
        }
    }
}
