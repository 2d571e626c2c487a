//! Deterministic benchmark datasets.
//!
//! Five synthetic fixtures mirror the attribute compositions of the classic
//! benchmark datasets (abalone, car, convex, gcredit, winequality) at desk
//! scale: same numeric/nominal/class arity mix, capped at 5,000 rows, no
//! missing cells and no outliers. Generation is seeded, so the in-memory
//! datasets and the ARFF files under `fixtures/` stay byte-for-byte in sync
//! (see `examples/gen_fixtures.rs`).

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::dataset::{Attribute, AttributeKind, Cell, Dataset};

/// Uniform value on a 1/10000 grid, so the decimal rendering in ARFF parses
/// back to the identical f64.
fn grid_value(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(0..10_000) as f64 / 10_000.0
}

fn nominal_values(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

struct Shape {
    name: &'static str,
    seed: u64,
    rows: usize,
    numeric: usize,
    /// Declared arity of each nominal attribute.
    nominal: &'static [usize],
    class_values: usize,
}

fn synthesize(shape: &Shape, rows: usize, seed: u64) -> Dataset {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut attributes = Vec::new();
    for i in 0..shape.numeric {
        attributes.push(Attribute::numeric(format!("x{i}")));
    }
    for (i, arity) in shape.nominal.iter().enumerate() {
        attributes.push(Attribute::new(
            format!("n{i}"),
            AttributeKind::Nominal(nominal_values(&format!("n{i}v"), *arity)),
        ));
    }
    let class_values = nominal_values("c", shape.class_values);
    attributes.push(Attribute::nominal("class", class_values.clone()));
    let class_index = attributes.len() - 1;

    let data: Vec<Vec<Cell>> = (0..rows)
        .map(|_| {
            let mut row = Vec::with_capacity(attributes.len());
            for _ in 0..shape.numeric {
                row.push(Cell::Numeric(grid_value(&mut rng)));
            }
            for arity in shape.nominal {
                let v = rng.gen_range(0..*arity);
                row.push(Cell::Nominal(format!("n{}v{v}", row.len() - shape.numeric)));
            }
            let c = rng.gen_range(0..shape.class_values);
            row.push(Cell::Nominal(class_values[c].clone()));
            row
        })
        .collect();

    Dataset::new(shape.name, attributes, class_index, data).expect("fixture construction")
}

const ABALONE: Shape = Shape {
    name: "abalone_toy",
    seed: 101,
    rows: 5_000,
    numeric: 7,
    nominal: &[3],
    class_values: 26,
};

const CAR: Shape = Shape {
    name: "car_toy",
    seed: 102,
    rows: 1_210,
    numeric: 0,
    nominal: &[4, 4, 4, 3, 3, 3],
    class_values: 4,
};

const CONVEX: Shape = Shape {
    name: "convex_toy",
    seed: 103,
    rows: 1_000,
    numeric: 50,
    nominal: &[],
    class_values: 2,
};

const GCREDIT: Shape = Shape {
    name: "gcredit_toy",
    seed: 104,
    rows: 1_000,
    numeric: 7,
    nominal: &[4, 5, 10, 5, 5, 4, 3, 4, 3, 3, 4, 2, 2],
    class_values: 2,
};

const WINEQW: Shape = Shape {
    name: "wineqw_toy",
    seed: 105,
    rows: 2_000,
    numeric: 11,
    nominal: &[],
    class_values: 7,
};

/// 7 numeric + 1 three-valued nominal attribute, 26-valued class, 5,000 rows.
pub fn abalone_toy() -> Dataset {
    synthesize(&ABALONE, ABALONE.rows, ABALONE.seed)
}

/// 6 nominal attributes, 4-valued class, 1,210 rows.
pub fn car_toy() -> Dataset {
    synthesize(&CAR, CAR.rows, CAR.seed)
}

/// 50 numeric attributes, binary class, 1,000 rows.
pub fn convex_toy() -> Dataset {
    synthesize(&CONVEX, CONVEX.rows, CONVEX.seed)
}

/// 7 numeric + 13 nominal attributes, binary class, 1,000 rows.
pub fn gcredit_toy() -> Dataset {
    synthesize(&GCREDIT, GCREDIT.rows, GCREDIT.seed)
}

/// 11 numeric attributes, 7-valued class, 2,000 rows.
pub fn wineqw_toy() -> Dataset {
    synthesize(&WINEQW, WINEQW.rows, WINEQW.seed)
}

/// All five benchmark fixtures.
pub fn builtin() -> Vec<Dataset> {
    vec![abalone_toy(), car_toy(), convex_toy(), gcredit_toy(), wineqw_toy()]
}

/// A gcredit-shaped dataset at an arbitrary row count, for scaling
/// experiments. The schema matches [`gcredit_toy`]; only the rows differ.
pub fn gcredit_shaped(name: &str, rows: usize, seed: u64) -> Dataset {
    let shape = Shape {
        name: "gcredit_shaped",
        ..GCREDIT
    };
    let d = synthesize(&shape, rows, seed);
    Dataset::new(name, d.attributes().to_vec(), d.class_index(), d.rows().to_vec())
        .expect("renaming preserves invariants")
}
