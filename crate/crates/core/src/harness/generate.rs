//! Seeded random ribbon complexes.
//!
//! Each ribbon is drawn as two concentric polygons: the outer cycle on a
//! circle, the inner cycle through its shared outer vertices and through
//! interior points, all ordered by angle. Drawings that fail validation are
//! redrawn.

use std::f64::consts::TAU;
use std::ops::RangeInclusive;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::complex::{CellComplex, Edge, Point2};
use crate::proximity::FeatureVector;
use crate::scalar::Scalar;

use super::format::{Document, ProbeBody, ProbeDecl};
use super::HarnessError;

pub const MAX_ATTEMPTS: usize = 1000;

/// Probe attached to a generated document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GenProbe {
    None,
    /// Random integer vectors per vertex.
    Pointwise {
        arity: usize,
        values: RangeInclusive<i64>,
    },
    /// Random integer vectors per ribbon.
    Holistic {
        arity: usize,
        values: RangeInclusive<i64>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenConfig {
    pub seed: u64,
    pub ribbons: RangeInclusive<usize>,
    pub outer_len: RangeInclusive<usize>,
    pub inner_len: RangeInclusive<usize>,
    pub bridges: RangeInclusive<usize>,
    /// Vertices shared by the outer and inner cycle.
    pub intersections: RangeInclusive<usize>,
    pub probe: GenProbe,
}

impl Default for GenConfig {
    fn default() -> Self {
        GenConfig {
            seed: 1,
            ribbons: 1..=2,
            outer_len: 6..=10,
            inner_len: 4..=8,
            bridges: 0..=2,
            intersections: 0..=2,
            probe: GenProbe::Pointwise {
                arity: 1,
                values: 0..=3,
            },
        }
    }
}

impl GenConfig {
    fn validate(&self) -> Result<(), HarnessError> {
        let ranges = [
            ("ribbons", &self.ribbons),
            ("outer_len", &self.outer_len),
            ("inner_len", &self.inner_len),
            ("bridges", &self.bridges),
            ("intersections", &self.intersections),
        ];
        for (name, r) in ranges {
            if r.is_empty() {
                return Err(HarnessError::InvalidConfig(format!(
                    "{name} range is empty"
                )));
            }
        }
        if *self.ribbons.start() == 0 {
            return Err(HarnessError::InvalidConfig(
                "at least one ribbon is required".into(),
            ));
        }
        if *self.outer_len.start() < 3 || *self.inner_len.start() < 3 {
            return Err(HarnessError::InvalidConfig(
                "cycles need at least 3 vertices".into(),
            ));
        }
        if let GenProbe::Pointwise { arity, values } | GenProbe::Holistic { arity, values } =
            &self.probe
        {
            if *arity == 0 || values.is_empty() {
                return Err(HarnessError::InvalidConfig(
                    "probe needs a positive arity and values".into(),
                ));
            }
        }
        Ok(())
    }
}

/// Nearest multiple of 1/1000.
fn coord(v: f64) -> Scalar {
    Scalar::new((v * 1000.0).round() as i64, 1000)
}

struct Shape {
    outer: usize,
    inner: usize,
    shared: usize,
    bridges: usize,
}

fn pick_shape<R: Rng>(rng: &mut R, cfg: &GenConfig) -> Option<Shape> {
    let s = Shape {
        outer: rng.random_range(cfg.outer_len.clone()),
        inner: rng.random_range(cfg.inner_len.clone()),
        shared: rng.random_range(cfg.intersections.clone()),
        bridges: rng.random_range(cfg.bridges.clone()),
    };
    // The inner cycle keeps at least one interior vertex, and each bridge
    // needs its own outer-only and inner-only endpoint.
    let inner_only = s.inner.checked_sub(s.shared)?;
    let outer_only = s.outer.checked_sub(s.shared)?;
    (inner_only >= s.bridges.max(1) && outer_only >= s.bridges).then_some(s)
}

/// Tries to add one ribbon centred at `(cx, 0)`.
fn draw_ribbon<R: Rng>(
    rng: &mut R,
    base: &CellComplex,
    index: usize,
    cx: f64,
    shape: &Shape,
) -> Option<CellComplex> {
    const R_OUT: f64 = 4.0;
    let mut c = base.clone();
    let at = |r: f64, a: f64| Point2::new(coord(cx + r * a.cos()), coord(r * a.sin()));

    let step = TAU / shape.outer as f64;
    let outer_angles: Vec<f64> = (0..shape.outer)
        .map(|j| step * j as f64 + rng.random_range(-0.3..0.3) * step)
        .collect();
    let outer_ids: Vec<String> = (0..shape.outer).map(|j| format!("r{index}o{j}")).collect();
    for (id, &a) in outer_ids.iter().zip(&outer_angles) {
        c.add_vertex(id.clone(), at(R_OUT, a)).ok()?;
    }

    let mut shared: Vec<usize> = (0..shape.outer).collect();
    shared.shuffle(rng);
    shared.truncate(shape.shared);

    // (angle, id, is inner-only)
    let mut ring: Vec<(f64, String, bool)> = shared
        .iter()
        .map(|&j| (outer_angles[j].rem_euclid(TAU), outer_ids[j].clone(), false))
        .collect();
    let own = shape.inner - shape.shared;
    let own_step = TAU / own as f64;
    let offset = rng.random_range(0.0..TAU);
    for j in 0..own {
        let a = (offset + own_step * j as f64 + rng.random_range(-0.25..0.25) * own_step)
            .rem_euclid(TAU);
        let r = rng.random_range(1.5..2.5);
        let id = format!("r{index}i{j}");
        c.add_vertex(id.clone(), at(r, a)).ok()?;
        ring.push((a, id, true));
    }
    ring.sort_by(|x, y| x.0.total_cmp(&y.0));

    for w in outer_ids.iter().zip(outer_ids.iter().cycle().skip(1)) {
        c.add_edge(w.0, w.1).ok()?;
    }
    let inner_ids: Vec<&str> = ring.iter().map(|(_, id, _)| id.as_str()).collect();
    for (a, b) in inner_ids.iter().zip(inner_ids.iter().cycle().skip(1)) {
        if !c.has_edge(a, b) {
            c.add_edge(a, b).ok()?;
        }
    }
    let outer_name = format!("r{index}_outer");
    let inner_name = format!("r{index}_inner");
    c.add_cycle(&outer_name, &outer_ids).ok()?;
    c.add_cycle(&inner_name, &inner_ids).ok()?;

    // Pair outer-only and inner-only endpoints in angular order so bridges
    // tend not to cross.
    let mut outer_only: Vec<usize> = (0..shape.outer).filter(|j| !shared.contains(j)).collect();
    outer_only.shuffle(rng);
    outer_only.truncate(shape.bridges);
    outer_only.sort_by(|&x, &y| outer_angles[x].total_cmp(&outer_angles[y]));
    let mut inner_only: Vec<&(f64, String, bool)> = ring.iter().filter(|v| v.2).collect();
    inner_only.shuffle(rng);
    inner_only.truncate(shape.bridges);
    inner_only.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut bridges = Vec::new();
    for (&o, i) in outer_only.iter().zip(&inner_only) {
        c.add_edge(&outer_ids[o], &i.1).ok()?;
        bridges.push(Edge::new(outer_ids[o].clone(), i.1.clone()).ok()?);
    }
    c.add_ribbon(&format!("rb{index}"), &outer_name, &inner_name, &bridges)
        .ok()?;
    c.cw_check().is_empty().then_some(c)
}

/// A valid complex with at least one ribbon. The same config always gives
/// the same complex.
pub fn generate_ribbon_complex(cfg: &GenConfig) -> Result<CellComplex, HarnessError> {
    Ok(generate_document(cfg)?.complex)
}

/// A generated complex together with the configured probe.
pub fn generate_document(cfg: &GenConfig) -> Result<Document, HarnessError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let count = rng.random_range(cfg.ribbons.clone());
    let mut complex = CellComplex::new(format!("generated_{}", cfg.seed));
    let mut attempts = 0;
    for index in 0..count {
        loop {
            attempts += 1;
            if attempts > MAX_ATTEMPTS {
                return Err(HarnessError::GenerationExhausted {
                    attempts: MAX_ATTEMPTS,
                });
            }
            let Some(shape) = pick_shape(&mut rng, cfg) else {
                continue;
            };
            if let Some(c) = draw_ribbon(&mut rng, &complex, index, 10.0 * index as f64, &shape) {
                complex = c;
                break;
            }
        }
    }

    let mut doc = Document::new(complex);
    let random_vector = |rng: &mut ChaCha8Rng, arity: usize, values: &RangeInclusive<i64>| {
        FeatureVector::from_ints(
            &(0..arity)
                .map(|_| rng.random_range(values.clone()))
                .collect::<Vec<_>>(),
        )
    };
    match &cfg.probe {
        GenProbe::None => {}
        GenProbe::Pointwise { arity, values } => {
            let body = (0..doc.complex.vertices().len())
                .map(|_| random_vector(&mut rng, *arity, values))
                .collect();
            doc.probes.push(ProbeDecl {
                name: "phi".into(),
                body: ProbeBody::Pointwise(body),
            });
        }
        GenProbe::Holistic { arity, values } => {
            let body = doc
                .complex
                .ribbons()
                .iter()
                .map(|r| (r.name.clone(), random_vector(&mut rng, *arity, values)))
                .collect();
            doc.probes.push(ProbeDecl {
                name: "phi".into(),
                body: ProbeBody::Holistic(body),
            });
        }
    }
    Ok(doc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::betti_alpha;
    use crate::harness::format::{parse, render};

    #[test]
    fn default_config_gives_valid_complex() {
        let c = generate_ribbon_complex(&GenConfig::default()).unwrap();
        assert!(!c.ribbons().is_empty());
        assert!(c.cw_check().is_empty());
    }

    #[test]
    fn deterministic_per_seed() {
        let cfg = GenConfig {
            seed: 42,
            ..GenConfig::default()
        };
        let a = generate_document(&cfg).unwrap();
        let b = generate_document(&cfg).unwrap();
        assert_eq!(render(&a), render(&b));
    }

    #[test]
    fn forced_shape_fixes_betti() {
        let cfg = GenConfig {
            seed: 7,
            ribbons: 1..=1,
            bridges: 2..=2,
            intersections: 2..=2,
            ..GenConfig::default()
        };
        let c = generate_ribbon_complex(&cfg).unwrap();
        assert_eq!(betti_alpha(&c.ribbons()[0]), 6);
    }

    #[test]
    fn generated_documents_round_trip() {
        for seed in 0..10 {
            let cfg = GenConfig {
                seed,
                ..GenConfig::default()
            };
            let doc = generate_document(&cfg).unwrap();
            let text = render(&doc);
            assert_eq!(render(&parse(&text).unwrap()), text);
        }
    }

    #[test]
    fn unsatisfiable_config_is_exhausted() {
        let cfg = GenConfig {
            outer_len: 3..=3,
            inner_len: 3..=3,
            bridges: 4..=4,
            ..GenConfig::default()
        };
        assert_eq!(
            generate_ribbon_complex(&cfg).unwrap_err(),
            HarnessError::GenerationExhausted {
                attempts: MAX_ATTEMPTS
            }
        );
    }
}
