//! The synthetic probe suite.
//!
//! Each dataset here is built to activate as few transformed-features as
//! possible, so that a successful component run pins down capabilities
//! precisely and an output/input difference isolates one effect. Real-world
//! data activates too many features at once to be useful for probing.
//!
//! Two layout rules keep probe effects clean:
//! * every missing cell pattern survives `PeriodicSampling` at k=2 (a
//!   missing cell and a present cell both sit at even row indices), so
//!   sampling never adds or removes a feature;
//! * numeric columns contain no 1.5-IQR outliers, so outlier removal never
//!   changes a feature either.

use crate::dataset::{Attribute, AttributeKind, Cell, Dataset};
use crate::dataset::extract_features;
use crate::features::{Binary, FeatureVector};

fn num(v: f64) -> Cell {
    Cell::Numeric(v)
}

fn nom(v: &str) -> Cell {
    Cell::Nominal(v.into())
}

fn date(v: &str) -> Cell {
    Cell::Date(v.into())
}

fn s(v: &str) -> Cell {
    Cell::Str(v.into())
}

const MISSING: Cell = Cell::Missing;

fn dataset(name: &str, attributes: Vec<Attribute>, rows: Vec<Vec<Cell>>) -> Dataset {
    let class_index = attributes.len() - 1;
    Dataset::new(name, attributes, class_index, rows).expect("suite dataset must be valid")
}

fn binary_class() -> Attribute {
    Attribute::nominal("class", ["yes", "no"])
}

fn construct() -> Vec<Dataset> {
    vec![
        dataset(
            "suite_numeric_numeric_class",
            vec![
                Attribute::numeric("x"),
                Attribute::numeric("y"),
                Attribute::numeric("class"),
            ],
            vec![
                vec![num(0.0), num(0.0), num(0.0)],
                vec![num(1.0), num(1.0), num(2.0)],
                vec![num(2.0), num(4.0), num(6.0)],
                vec![num(3.0), num(9.0), num(12.0)],
                vec![num(4.0), num(16.0), num(20.0)],
                vec![num(5.0), num(25.0), num(30.0)],
            ],
        ),
        dataset(
            "suite_nominal_binary_class",
            vec![Attribute::nominal("a", ["red", "green", "blue"]), binary_class()],
            vec![
                vec![nom("red"), nom("yes")],
                vec![nom("green"), nom("no")],
                vec![nom("blue"), nom("yes")],
                vec![nom("red"), nom("no")],
                vec![nom("green"), nom("yes")],
                vec![nom("blue"), nom("no")],
            ],
        ),
        dataset(
            "suite_binary_attribute",
            vec![Attribute::nominal("a", ["on", "off"]), binary_class()],
            vec![
                vec![nom("on"), nom("yes")],
                vec![nom("off"), nom("no")],
                vec![nom("on"), nom("no")],
                vec![nom("off"), nom("yes")],
            ],
        ),
        dataset(
            "suite_unary_attribute",
            vec![Attribute::nominal("a", ["only"]), binary_class()],
            vec![
                vec![nom("only"), nom("yes")],
                vec![nom("only"), nom("no")],
                vec![nom("only"), nom("yes")],
                vec![nom("only"), nom("no")],
            ],
        ),
        dataset(
            "suite_unary_class",
            vec![Attribute::numeric("x"), Attribute::nominal("class", ["single"])],
            vec![
                vec![num(1.0), nom("single")],
                vec![num(2.0), nom("single")],
                vec![num(3.0), nom("single")],
                vec![num(4.0), nom("single")],
            ],
        ),
        dataset(
            "suite_nominal_class_numeric",
            vec![
                Attribute::numeric("x"),
                Attribute::nominal("class", ["red", "green", "blue"]),
            ],
            vec![
                vec![num(1.0), nom("red")],
                vec![num(2.0), nom("green")],
                vec![num(3.0), nom("blue")],
                vec![num(4.0), nom("red")],
                vec![num(5.0), nom("green")],
                vec![num(6.0), nom("blue")],
            ],
        ),
        dataset(
            "suite_nominal_class_nominal",
            vec![
                Attribute::nominal("a", ["red", "green", "blue"]),
                Attribute::nominal("class", ["low", "mid", "high"]),
            ],
            vec![
                vec![nom("red"), nom("low")],
                vec![nom("green"), nom("mid")],
                vec![nom("blue"), nom("high")],
                vec![nom("red"), nom("mid")],
                vec![nom("green"), nom("high")],
                vec![nom("blue"), nom("low")],
            ],
        ),
        dataset(
            "suite_missing_values",
            vec![
                Attribute::numeric("x"),
                Attribute::numeric("y"),
                Attribute::numeric("class"),
            ],
            vec![
                vec![MISSING, num(1.0), num(1.0)],
                vec![num(1.0), num(2.0), num(2.0)],
                vec![MISSING, num(3.0), num(3.0)],
                vec![num(3.0), num(4.0), num(4.0)],
                vec![num(4.0), num(5.0), num(5.0)],
                vec![num(5.0), num(6.0), num(6.0)],
            ],
        ),
        dataset(
            "suite_missing_class",
            vec![Attribute::numeric("x"), binary_class()],
            vec![
                vec![num(1.0), MISSING],
                vec![num(2.0), nom("yes")],
                vec![num(3.0), nom("no")],
                vec![num(4.0), nom("yes")],
                vec![num(5.0), nom("no")],
                vec![num(6.0), nom("yes")],
            ],
        ),
        dataset(
            "suite_empty_nominal",
            vec![
                Attribute::nominal::<&str>("e", []),
                Attribute::nominal("b", ["x", "y"]),
                binary_class(),
            ],
            vec![
                vec![MISSING, nom("x"), nom("yes")],
                vec![MISSING, MISSING, nom("no")],
                vec![MISSING, nom("y"), nom("yes")],
                vec![MISSING, nom("x"), nom("no")],
                vec![MISSING, nom("y"), nom("yes")],
                vec![MISSING, nom("x"), nom("no")],
            ],
        ),
        dataset(
            "suite_date_attribute",
            vec![Attribute::new("d", AttributeKind::Date), binary_class()],
            vec![
                vec![date("2020-01-01"), nom("yes")],
                vec![date("2020-01-02"), nom("no")],
                vec![date("2020-01-03"), nom("yes")],
                vec![date("2020-01-04"), nom("no")],
            ],
        ),
        dataset(
            "suite_date_class",
            vec![Attribute::numeric("x"), Attribute::new("class", AttributeKind::Date)],
            vec![
                vec![num(1.0), date("2021-05-01")],
                vec![num(2.0), date("2021-05-02")],
                vec![num(3.0), date("2021-05-03")],
                vec![num(4.0), date("2021-05-04")],
            ],
        ),
        dataset(
            "suite_string_class",
            vec![Attribute::numeric("x"), Attribute::new("class", AttributeKind::String)],
            vec![
                vec![num(1.0), s("alpha")],
                vec![num(2.0), s("beta")],
                vec![num(3.0), s("gamma")],
                vec![num(4.0), s("delta")],
            ],
        ),
        dataset(
            "suite_no_rows",
            vec![Attribute::numeric("x"), binary_class()],
            vec![],
        ),
        dataset("suite_binary_class_only", vec![binary_class()], vec![
            vec![nom("yes")],
            vec![nom("no")],
            vec![nom("yes")],
            vec![nom("no")],
        ]),
        dataset(
            "suite_numeric_class_only",
            vec![Attribute::numeric("class")],
            vec![vec![num(1.0)], vec![num(2.0)], vec![num(3.0)], vec![num(4.0)]],
        ),
        dataset(
            "suite_nominal_class_only",
            vec![Attribute::nominal("class", ["red", "green", "blue"])],
            vec![
                vec![nom("red")],
                vec![nom("green")],
                vec![nom("blue")],
                vec![nom("red")],
                vec![nom("green")],
                vec![nom("blue")],
            ],
        ),
        dataset(
            "suite_missing_values_nominal",
            vec![Attribute::nominal("a", ["red", "green", "blue"]), binary_class()],
            vec![
                vec![nom("red"), nom("yes")],
                vec![nom("green"), nom("no")],
                vec![MISSING, nom("yes")],
                vec![nom("red"), nom("no")],
                vec![nom("blue"), nom("yes")],
                vec![nom("green"), nom("no")],
            ],
        ),
        dataset(
            "suite_numeric_binary_class",
            vec![Attribute::numeric("x"), Attribute::numeric("y"), binary_class()],
            vec![
                vec![num(1.0), num(2.0), nom("yes")],
                vec![num(2.0), num(1.0), nom("no")],
                vec![num(3.0), num(4.0), nom("yes")],
                vec![num(4.0), num(3.0), nom("no")],
                vec![num(5.0), num(6.0), nom("yes")],
                vec![num(6.0), num(5.0), nom("no")],
            ],
        ),
        dataset(
            "suite_mixed_attributes",
            vec![
                Attribute::numeric("x"),
                Attribute::nominal("a", ["red", "green", "blue"]),
                binary_class(),
            ],
            vec![
                vec![num(1.0), nom("red"), nom("yes")],
                vec![num(2.0), nom("green"), nom("no")],
                vec![num(3.0), nom("blue"), nom("yes")],
                vec![num(4.0), nom("red"), nom("no")],
                vec![num(5.0), nom("green"), nom("yes")],
                vec![num(6.0), nom("blue"), nom("no")],
            ],
        ),
        dataset(
            "suite_missing_both",
            vec![Attribute::numeric("x"), Attribute::numeric("y"), binary_class()],
            vec![
                vec![num(1.0), num(1.0), MISSING],
                vec![num(2.0), num(2.0), nom("yes")],
                vec![MISSING, num(3.0), nom("no")],
                vec![num(4.0), num(4.0), nom("yes")],
                vec![num(5.0), num(5.0), nom("no")],
                vec![num(6.0), num(6.0), nom("yes")],
            ],
        ),
        dataset(
            "suite_date_attr_mixed",
            vec![
                Attribute::new("d", AttributeKind::Date),
                Attribute::numeric("x"),
                binary_class(),
            ],
            vec![
                vec![date("2019-03-01"), num(1.0), nom("yes")],
                vec![date("2019-03-02"), num(2.0), nom("no")],
                vec![date("2019-03-03"), num(3.0), nom("yes")],
                vec![date("2019-03-04"), num(4.0), nom("no")],
            ],
        ),
    ]
}

/// Builds the probe suite, paired with each dataset's feature vector, in
/// canonical probe order: ascending number of active features, construction
/// order breaking ties. The order matters because effects are write-once.
pub fn generate_synthetic_suite() -> Vec<(Dataset, FeatureVector<Binary>)> {
    let mut suite: Vec<(Dataset, FeatureVector<Binary>)> = construct()
        .into_iter()
        .map(|d| {
            let v = extract_features(&d);
            (d, v)
        })
        .collect();
    suite.sort_by_key(|(_, v)| v.active().count());
    suite
}
