use super::*;
use crate::features::{Binary, FeatureVector, TransformedFeature as Tf};
use crate::fixtures;

fn toy_arff() -> &'static str {
    "@relation toy\n\
     @attribute age numeric\n\
     @attribute color {red,green,blue}\n\
     @attribute label {yes,no}\n\
     @data\n\
     1.5,red,yes\n\
     2.0,?,no\n\
     ?,blue,yes\n"
}

#[test]
fn parses_header_and_rows() {
    let d = load_arff_str(toy_arff(), "fallback").unwrap();
    assert_eq!(d.name(), "toy");
    assert_eq!(d.attributes().len(), 3);
    assert_eq!(d.class_index(), 2);
    assert_eq!(d.n_rows(), 3);
    assert_eq!(d.rows()[0][0], Cell::Numeric(1.5));
    assert_eq!(d.rows()[1][1], Cell::Missing);
    assert_eq!(d.rows()[2][1], Cell::Nominal("blue".into()));
}

#[test]
fn zero_row_file_with_valid_header_loads() {
    let text = "@relation empty\n@attribute x numeric\n@attribute c {a,b}\n@data\n";
    let d = load_arff_str(text, "empty").unwrap();
    assert_eq!(d.n_rows(), 0);
    assert_eq!(d.attributes().len(), 2);
}

#[test]
fn text_in_numeric_column_is_a_schema_error() {
    let text = "@relation bad\n@attribute x numeric\n@attribute c {a,b}\n@data\n1,a\nabc,b\n";
    let err = load_arff_str(text, "bad").unwrap_err();
    match err {
        DatasetError::Schema { row, column, .. } => {
            assert_eq!(row, 1);
            assert_eq!(column, "x");
        }
        other => panic!("expected schema error, got {other}"),
    }
}

#[test]
fn undeclared_nominal_value_is_a_schema_error() {
    let text = "@relation bad\n@attribute c {a,b}\n@data\nz\n";
    assert!(matches!(
        load_arff_str(text, "bad").unwrap_err(),
        DatasetError::Schema { row: 0, .. }
    ));
}

#[test]
fn non_finite_numeric_cells_are_rejected() {
    for bad in ["NaN", "inf", "-inf"] {
        let text = format!("@relation bad\n@attribute x numeric\n@attribute c {{a,b}}\n@data\n{bad},a\n");
        assert!(
            matches!(load_arff_str(&text, "bad"), Err(DatasetError::Schema { .. })),
            "`{bad}` must not load"
        );
    }
}

#[test]
fn class_override_comment_is_honored() {
    let text = "@relation t\n%class: c\n@attribute c {a,b}\n@attribute x numeric\n@data\na,1\n";
    let d = load_arff_str(text, "t").unwrap();
    assert_eq!(d.class_index(), 0);
}

#[test]
fn quoted_names_and_values() {
    let text = "@relation q\n@attribute 'my attr' {'v 1',v2}\n@attribute c {a,b}\n@data\n'v 1',a\n";
    let d = load_arff_str(text, "q").unwrap();
    assert_eq!(d.attributes()[0].name, "my attr");
    assert_eq!(d.rows()[0][0], Cell::Nominal("v 1".into()));
}

#[test]
fn gcredit_fixture_has_expected_shape() {
    let d = fixtures::gcredit_toy();
    let numeric = d
        .attribute_indices()
        .filter(|i| d.attributes()[*i].kind == AttributeKind::Numeric)
        .count();
    let nominal = d
        .attribute_indices()
        .filter(|i| d.attributes()[*i].kind.is_nominal())
        .count();
    assert_eq!(numeric, 7);
    assert_eq!(nominal, 13);
    assert_eq!(d.attributes().len(), 21); // 20 attributes + class
    match &d.class_attribute().kind {
        AttributeKind::Nominal(values) => assert_eq!(values.len(), 2),
        other => panic!("gcredit class should be nominal, got {other:?}"),
    }
}

#[test]
fn arff_round_trips_through_writer() {
    let d = load_arff_str(toy_arff(), "toy").unwrap();
    let again = load_arff_str(&write_arff(&d), "toy").unwrap();
    assert_eq!(d, again);
}

#[test]
fn extract_abalone_like_shape() {
    let d = fixtures::abalone_toy();
    let v = extract_features(&d);
    assert_eq!(v.get(Tf::NumericAttributes), 1);
    assert_eq!(v.get(Tf::NominalAttributes), 1);
    assert_eq!(v.get(Tf::NominalClass), 1);
    let expected = FeatureVector::<Binary>::zeros()
        .with(Tf::NumericAttributes, 1)
        .with(Tf::NominalAttributes, 1)
        .with(Tf::NominalClass, 1);
    assert_eq!(v, expected, "all other slots must be 0");
}

#[test]
fn two_valued_class_is_binary_not_nominal() {
    let v = extract_features(&fixtures::gcredit_toy());
    assert_eq!(v.get(Tf::BinaryClass), 1);
    assert_eq!(v.get(Tf::NominalClass), 0);
}

#[test]
fn missing_class_cell_sets_missing_class_values() {
    let text = "@relation m\n@attribute x numeric\n@attribute c {a,b}\n@data\n1,a\n2,?\n";
    let v = extract_features(&load_arff_str(text, "m").unwrap());
    assert_eq!(v.get(Tf::MissingClassValues), 1);
    assert_eq!(v.get(Tf::MissingValues), 0, "class missing is not attribute missing");
}

#[test]
fn unary_and_binary_attribute_bucketing() {
    let text = "@relation u\n@attribute one {only}\n@attribute two {l,r}\n@attribute c {a,b}\n@data\nonly,l,a\n";
    let v = extract_features(&load_arff_str(text, "u").unwrap());
    assert_eq!(v.get(Tf::UnaryAttributes), 1);
    assert_eq!(v.get(Tf::BinaryAttributes), 1);
    assert_eq!(v.get(Tf::NominalAttributes), 0);
}

#[test]
fn all_missing_nominal_column_is_empty() {
    let text = "@relation e\n@attribute e {x,y}\n@attribute c {a,b}\n@data\n?,a\n?,b\n";
    let v = extract_features(&load_arff_str(text, "e").unwrap());
    assert_eq!(v.get(Tf::EmptyNominalAttributes), 1);
    assert_eq!(v.get(Tf::MissingValues), 1);
    assert_eq!(v.get(Tf::BinaryAttributes), 1, "declared arity still counts");
}

#[test]
fn date_and_string_kinds() {
    let text = "@relation ds\n@attribute when date yyyy-MM-dd\n@attribute note string\n@attribute c {a,b}\n@data\n2020-01-01,hello,a\n";
    let d = load_arff_str(text, "ds").unwrap();
    let v = extract_features(&d);
    assert_eq!(v.get(Tf::DateAttributes), 1);
    // String attributes have no slot of their own.
    assert_eq!(v.active().count(), 2); // DATE_ATTRIBUTES + BINARY_CLASS
}

#[test]
fn predictive_model_slot_is_always_zero_for_datasets() {
    for (d, _) in crate::kb::generate_synthetic_suite() {
        assert_eq!(extract_features(&d).get(Tf::PredictiveModel), 0);
    }
}

#[test]
fn extraction_ignores_row_order() {
    let d = fixtures::gcredit_toy();
    let before = extract_features(&d);
    let mut rows = d.rows().to_vec();
    rows.reverse();
    rows.swap(0, 5);
    let shuffled = Dataset::new(d.name(), d.attributes().to_vec(), d.class_index(), rows).unwrap();
    assert_eq!(extract_features(&shuffled), before);
}

#[test]
fn exactly_one_class_kind_slot_per_dataset() {
    let class_kind = [
        Tf::BinaryClass,
        Tf::NumericClass,
        Tf::DateClass,
        Tf::NominalClass,
        Tf::SymbolicClass,
        Tf::StringClass,
        Tf::UnaryClass,
    ];
    for (d, v) in crate::kb::generate_synthetic_suite() {
        let set: i8 = class_kind.iter().map(|f| v.get(*f)).sum();
        assert_eq!(set, 1, "dataset {} must have exactly one class-kind slot", d.name());
    }
    for d in fixtures::builtin() {
        let v = extract_features(&d);
        let set: i8 = class_kind.iter().map(|f| v.get(*f)).sum();
        assert_eq!(set, 1, "fixture {}", d.name());
    }
}

#[test]
fn attribute_slots_are_witnessed_by_some_attribute() {
    // For every attribute-kind slot set to 1 there is at least one attribute
    // of that kind; audit by enumeration over the synthetic suite.
    for (d, v) in crate::kb::generate_synthetic_suite() {
        let mut witness = FeatureVector::<Binary>::zeros();
        for i in d.attribute_indices() {
            match &d.attributes()[i].kind {
                AttributeKind::Numeric => witness.set(Tf::NumericAttributes, 1),
                AttributeKind::Date => witness.set(Tf::DateAttributes, 1),
                AttributeKind::String => {}
                AttributeKind::Nominal(values) => {
                    let distinct: std::collections::BTreeSet<_> = values.iter().collect();
                    match distinct.len() {
                        0 => {}
                        1 => witness.set(Tf::UnaryAttributes, 1),
                        2 => witness.set(Tf::BinaryAttributes, 1),
                        _ => witness.set(Tf::NominalAttributes, 1),
                    }
                }
            }
        }
        for f in [
            Tf::NumericAttributes,
            Tf::DateAttributes,
            Tf::UnaryAttributes,
            Tf::BinaryAttributes,
            Tf::NominalAttributes,
        ] {
            if v.get(f) == 1 {
                assert_eq!(witness.get(f), 1, "{}: {} has no witnessing attribute", d.name(), f);
            }
        }
    }
}

#[test]
fn csv_with_schema_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("mini.csv");
    std::fs::write(&csv_path, "1.0,red,yes\n2.5,?,no\n").unwrap();
    std::fs::write(
        dir.path().join("mini.csv.schema.json"),
        r#"{
            "name": "mini",
            "attributes": [
                {"name": "x", "kind": "numeric"},
                {"name": "color", "kind": {"nominal": ["red", "blue"]}},
                {"name": "label", "kind": {"nominal": ["yes", "no"]}}
            ]
        }"#,
    )
    .unwrap();
    let d = load_dataset(&csv_path, Format::CsvWithSchema).unwrap();
    assert_eq!(d.name(), "mini");
    assert_eq!(d.n_rows(), 2);
    assert_eq!(d.class_index(), 2);
    assert_eq!(d.rows()[1][1], Cell::Missing);

    std::fs::write(&csv_path, "1.0,purple,yes\n").unwrap();
    assert!(matches!(
        load_dataset(&csv_path, Format::CsvWithSchema),
        Err(DatasetError::Schema { .. })
    ));
}
