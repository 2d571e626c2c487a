use super::*;
use crate::dataset::{extract_features, load_arff_str, Cell, Dataset};
use crate::kb::generate_synthetic_suite;

fn arff(text: &str) -> Dataset {
    load_arff_str(text, "inline").unwrap()
}

fn run(id: &str, d: &Dataset) -> Result<Output, ExecutionError> {
    execute_component(lookup(id).unwrap(), d)
}

fn run_filter(id: &str, d: &Dataset) -> Dataset {
    match run(id, d) {
        Ok(Output::Dataset(out)) => out,
        other => panic!("{id} should yield a dataset, got {other:?}"),
    }
}

#[test]
fn registry_has_eleven_components() {
    assert_eq!(registry().len(), 11);
    let ids: std::collections::BTreeSet<&str> =
        registry().iter().map(|c| c.id.as_str()).collect();
    assert_eq!(ids.len(), 11, "ids must be unique");
}

#[test]
fn lookup_finds_predictors_and_rejects_unknowns() {
    assert_eq!(lookup("LinearRegressor").unwrap().kind, ComponentKind::Predictor);
    assert_eq!(lookup("RemoveUseless").unwrap().kind, ComponentKind::Filter);
    assert_eq!(lookup("nonexistent").unwrap_err(), NotFound("nonexistent".into()));
}

#[test]
fn category_predictor_iff_kind_predictor() {
    for c in registry() {
        assert_eq!(
            c.kind == ComponentKind::Predictor,
            c.category == Category::Predictor,
            "{}",
            c.id
        );
    }
}

#[test]
fn linear_regressor_rejects_nominal_class() {
    let d = arff("@relation t\n@attribute x numeric\n@attribute c {a,b}\n@data\n1,a\n2,b\n");
    match run("LinearRegressor", &d) {
        Err(ExecutionError::IncompatibleData(reason)) => {
            assert_eq!(reason, "class not numeric")
        }
        other => panic!("expected IncompatibleData, got {other:?}"),
    }
}

#[test]
fn linear_regressor_fits_clean_numeric_data() {
    let d = arff("@relation t\n@attribute x numeric\n@attribute c numeric\n@data\n1,2\n2,4\n3,6\n");
    match run("LinearRegressor", &d).unwrap() {
        Output::Model(m) => match m.params {
            ModelParams::Linear { weights } => {
                assert_eq!(weights.len(), 2);
                assert!((weights[1] - 2.0).abs() < 1e-9, "slope {weights:?}");
                assert!(weights[0].abs() < 1e-9, "intercept {weights:?}");
            }
            other => panic!("{other:?}"),
        },
        other => panic!("{other:?}"),
    }
}

#[test]
fn linear_regressor_degenerates_on_zero_rows() {
    let d = arff("@relation t\n@attribute x numeric\n@attribute c numeric\n@data\n");
    assert!(matches!(
        run("LinearRegressor", &d),
        Err(ExecutionError::Degenerate(_))
    ));
}

#[test]
fn replace_missing_values_is_identity_on_complete_data() {
    let d = crate::fixtures::gcredit_shaped("t", 25, 9);
    let out = run_filter("ReplaceMissingValues", &d);
    assert_eq!(out, d, "no missing values means value-equal output");
}

#[test]
fn replace_missing_values_imputes_mean_and_mode() {
    let d = arff(
        "@relation t\n@attribute x numeric\n@attribute a {u,v}\n@attribute c {p,q}\n@data\n\
         1,u,p\n?,v,q\n3,?,p\n4,u,q\n",
    );
    let out = run_filter("ReplaceMissingValues", &d);
    // mean(1,3,4) = 8/3; mode of {u,v,u} = u
    assert_eq!(out.rows()[1][0], Cell::Numeric(8.0 / 3.0));
    assert_eq!(out.rows()[2][1], Cell::Nominal("u".into()));
    use crate::features::TransformedFeature as Tf;
    assert_eq!(extract_features(&out).get(Tf::MissingValues), 0);
}

#[test]
fn replace_missing_values_skips_the_class_column() {
    let d = arff("@relation t\n@attribute x numeric\n@attribute c {p,q}\n@data\n1,p\n2,?\n");
    let out = run_filter("ReplaceMissingValues", &d);
    assert_eq!(out.rows()[1][1], Cell::Missing);
}

#[test]
fn periodic_sampling_keeps_every_second_row() {
    let rows: Vec<String> = (0..10).map(|i| format!("{i},p")).collect();
    let d = arff(&format!(
        "@relation t\n@attribute x numeric\n@attribute c {{p,q}}\n@data\n{}\n",
        rows.join("\n")
    ));
    let out = run_filter("PeriodicSampling", &d);
    assert_eq!(out.n_rows(), 5);
    let kept: Vec<f64> = out
        .rows()
        .iter()
        .map(|r| match r[0] {
            Cell::Numeric(v) => v,
            _ => unreachable!(),
        })
        .collect();
    assert_eq!(kept, vec![0.0, 2.0, 4.0, 6.0, 8.0]);
    assert_eq!(out.attributes(), d.attributes());
}

#[test]
fn periodic_sampling_honors_k_override() {
    let desc = lookup("PeriodicSampling").unwrap();
    let mut overrides = std::collections::BTreeMap::new();
    overrides.insert("k".to_string(), ParamValue::Int(5));
    let with_k5 = desc.with_params(&overrides).unwrap();
    let d = crate::fixtures::gcredit_shaped("t", 20, 10);
    match execute_component(&with_k5, &d).unwrap() {
        Output::Dataset(out) => assert_eq!(out.n_rows(), 4),
        other => panic!("{other:?}"),
    }

    overrides.insert("bogus".to_string(), ParamValue::Int(1));
    assert!(matches!(
        desc.with_params(&overrides),
        Err(ExecutionError::InvalidParam(_))
    ));
}

#[test]
fn numeric_to_nominal_bins_attributes_and_leaves_class() {
    use crate::features::TransformedFeature as Tf;
    let d = arff("@relation t\n@attribute x numeric\n@attribute c numeric\n@data\n0,1\n5,2\n10,3\n");
    let out = run_filter("NumericToNominal", &d);
    let v = extract_features(&out);
    assert_eq!(v.get(Tf::NumericAttributes), 0);
    assert_eq!(v.get(Tf::NominalAttributes), 1);
    assert_eq!(v.get(Tf::NumericClass), 1, "class stays numeric");
    assert_eq!(out.rows()[0][0], Cell::Nominal("b0".into()));
    assert_eq!(out.rows()[2][0], Cell::Nominal("b9".into()));
}

#[test]
fn nominal_to_numeric_index_encodes() {
    let d = arff("@relation t\n@attribute a {u,v,w}\n@attribute c {p,q}\n@data\nw,p\nu,q\nv,p\n");
    let out = run_filter("NominalToNumeric", &d);
    assert_eq!(out.rows()[0][0], Cell::Numeric(2.0));
    assert_eq!(out.rows()[1][0], Cell::Numeric(0.0));
    assert_eq!(out.rows()[2][0], Cell::Numeric(1.0));
    assert_eq!(out.class_attribute().kind, AttributeKind::Nominal(vec!["p".into(), "q".into()]));
}

#[test]
fn nominal_to_numeric_rejects_empty_nominal_attributes() {
    let d = arff("@relation t\n@attribute e {u,v}\n@attribute c {p,q}\n@data\n?,p\n?,q\n");
    assert!(matches!(
        run("NominalToNumeric", &d),
        Err(ExecutionError::IncompatibleData(reason)) if reason.contains("empty nominal")
    ));
}

#[test]
fn principal_components_projects_numeric_data() {
    let d = crate::fixtures::gcredit_shaped("t", 40, 11);
    // gcredit has nominal attributes, so PCA must reject it outright...
    assert!(matches!(
        run("PrincipalComponents", &d),
        Err(ExecutionError::IncompatibleData(_))
    ));
    // ...but accepts the numeric-only wineqw shape and keeps the class.
    let w = fixtures_wineqw(30);
    let out = run_filter("PrincipalComponents", &w);
    assert!(out.attributes().len() <= w.attributes().len());
    assert_eq!(out.class_attribute(), w.class_attribute());
    assert_eq!(out.n_rows(), w.n_rows());
    assert!(out.attributes()[0].name.starts_with("pc"));
    for i in out.attribute_indices() {
        assert_eq!(out.attributes()[i].kind, AttributeKind::Numeric);
    }
}

fn fixtures_wineqw(rows: usize) -> Dataset {
    let d = crate::fixtures::wineqw_toy();
    Dataset::new(
        d.name(),
        d.attributes().to_vec(),
        d.class_index(),
        d.rows()[..rows].to_vec(),
    )
    .unwrap()
}

#[test]
fn principal_components_rejects_missing_values() {
    let d = arff("@relation t\n@attribute x numeric\n@attribute y numeric\n@attribute c {p,q}\n@data\n1,2,p\n?,3,q\n4,5,p\n");
    assert!(matches!(
        run("PrincipalComponents", &d),
        Err(ExecutionError::IncompatibleData(reason)) if reason == "missing values"
    ));
}

#[test]
fn principal_components_degenerates_on_constant_data() {
    let d = arff("@relation t\n@attribute x numeric\n@attribute c {p,q}\n@data\n3,p\n3,q\n3,p\n");
    assert!(matches!(
        run("PrincipalComponents", &d),
        Err(ExecutionError::Degenerate(reason)) if reason == "zero variance"
    ));
}

#[test]
fn remove_useless_drops_unary_and_empty_columns() {
    let d = arff(
        "@relation t\n@attribute one {only}\n@attribute e {u,v}\n@attribute x numeric\n@attribute c {p,q}\n@data\n\
         only,?,1,p\nonly,?,2,q\n",
    );
    let out = run_filter("RemoveUseless", &d);
    let names: Vec<&str> = out.attributes().iter().map(|a| a.name.as_str()).collect();
    assert_eq!(names, vec!["x", "c"]);
    assert_eq!(out.class_index(), 1);
}

#[test]
fn iqr_drops_outlier_rows() {
    let d = arff(
        "@relation t\n@attribute x numeric\n@attribute c {p,q}\n@data\n\
         1,p\n2,q\n3,p\n4,q\n5,p\n100,q\n",
    );
    let out = run_filter("IQROutlierRemoval", &d);
    assert_eq!(out.n_rows(), 5, "the 100 row is outside the upper fence");
    assert!(out
        .rows()
        .iter()
        .all(|r| !matches!(r[0], Cell::Numeric(v) if v > 5.0)));
}

#[test]
fn iqr_rejects_missing_values_but_tolerates_missing_class() {
    let missing_attr = arff("@relation t\n@attribute x numeric\n@attribute c {p,q}\n@data\n1,p\n?,q\n");
    assert!(matches!(
        run("IQROutlierRemoval", &missing_attr),
        Err(ExecutionError::IncompatibleData(_))
    ));
    let missing_class = arff("@relation t\n@attribute x numeric\n@attribute c {p,q}\n@data\n1,?\n2,q\n3,p\n");
    assert!(run("IQROutlierRemoval", &missing_class).is_ok());
}

#[test]
fn naive_bayes_requires_nominal_attributes_and_class() {
    let numeric_attrs = arff("@relation t\n@attribute x numeric\n@attribute c {p,q}\n@data\n1,p\n2,q\n");
    assert!(matches!(
        run("NaiveBayesNominal", &numeric_attrs),
        Err(ExecutionError::IncompatibleData(_))
    ));

    let nominal = arff("@relation t\n@attribute a {u,v}\n@attribute c {p,q}\n@data\nu,p\nv,q\nu,q\n");
    assert!(run("NaiveBayesNominal", &nominal).unwrap().is_model());

    // Missing attribute values are tolerated, missing labels are not.
    let missing_attr = arff("@relation t\n@attribute a {u,v}\n@attribute c {p,q}\n@data\n?,p\nv,q\n");
    assert!(run("NaiveBayesNominal", &missing_attr).unwrap().is_model());
    let missing_class = arff("@relation t\n@attribute a {u,v}\n@attribute c {p,q}\n@data\nu,?\nv,q\n");
    assert!(matches!(
        run("NaiveBayesNominal", &missing_class),
        Err(ExecutionError::IncompatibleData(_))
    ));
}

#[test]
fn majority_classifier_accepts_anything_with_a_nominal_class() {
    let messy = arff(
        "@relation t\n@attribute when date\n@attribute note string\n@attribute x numeric\n@attribute c {p,q}\n@data\n\
         2020-01-01,hello,1,p\n2020-01-02,world,?,p\n2020-01-03,!,3,q\n",
    );
    match run("MajorityClassifier", &messy).unwrap() {
        Output::Model(m) => match m.params {
            ModelParams::Majority { label } => assert_eq!(label, "p"),
            other => panic!("{other:?}"),
        },
        other => panic!("{other:?}"),
    }

    let numeric_class = arff("@relation t\n@attribute x numeric\n@attribute c numeric\n@data\n1,1\n");
    assert!(matches!(
        run("MajorityClassifier", &numeric_class),
        Err(ExecutionError::IncompatibleData(_))
    ));
}

#[test]
fn majority_tie_resolves_to_earliest_declared_value() {
    let d = arff("@relation t\n@attribute x numeric\n@attribute c {q,p}\n@data\n1,p\n2,q\n");
    match run("MajorityClassifier", &d).unwrap() {
        Output::Model(m) => match m.params {
            ModelParams::Majority { label } => assert_eq!(label, "q"),
            other => panic!("{other:?}"),
        },
        other => panic!("{other:?}"),
    }
}

#[test]
fn decision_stump_learns_a_useful_split() {
    let d = arff(
        "@relation t\n@attribute x numeric\n@attribute c {p,q}\n@data\n\
         1,p\n2,p\n3,p\n10,q\n11,q\n12,q\n",
    );
    match run("DecisionStump", &d).unwrap() {
        Output::Model(m) => match m.params {
            ModelParams::Stump { split, left_label, right_label, .. } => {
                match split {
                    StumpSplit::Threshold(t) => assert!((3.0..10.0).contains(&t), "threshold {t}"),
                    other => panic!("{other:?}"),
                }
                assert_eq!(left_label, "p");
                assert_eq!(right_label, "q");
            }
            other => panic!("{other:?}"),
        },
        other => panic!("{other:?}"),
    }
}

#[test]
fn decision_stump_rejects_unary_class_and_missing_values() {
    let unary = arff("@relation t\n@attribute x numeric\n@attribute c {p}\n@data\n1,p\n");
    assert!(matches!(
        run("DecisionStump", &unary),
        Err(ExecutionError::IncompatibleData(reason)) if reason == "unary class"
    ));
    let missing = arff("@relation t\n@attribute x numeric\n@attribute c {p,q}\n@data\n?,p\n2,q\n");
    assert!(matches!(
        run("DecisionStump", &missing),
        Err(ExecutionError::IncompatibleData(_))
    ));
}

#[test]
fn every_filter_preserves_the_class_attribute() {
    let suite = generate_synthetic_suite();
    for component in registry().iter().filter(|c| c.kind == ComponentKind::Filter) {
        for (dataset, _) in &suite {
            if let Ok(Output::Dataset(out)) = execute_component(component, dataset) {
                assert_eq!(
                    out.class_attribute(),
                    dataset.class_attribute(),
                    "{} changed the class attribute of {}",
                    component.id,
                    dataset.name()
                );
            }
        }
    }
}

#[test]
fn execution_is_deterministic_over_the_suite() {
    let suite = generate_synthetic_suite();
    for component in registry() {
        for (dataset, _) in &suite {
            assert_eq!(
                execute_component(component, dataset),
                execute_component(component, dataset),
                "{} on {}",
                component.id,
                dataset.name()
            );
        }
    }
}

#[test]
fn success_and_failure_coverage_over_the_suite() {
    // ReplaceMissingValues is total over the probe suite (documented); every
    // other component must fail at least once, and every component must
    // succeed at least once.
    let suite = generate_synthetic_suite();
    for component in registry() {
        let mut successes = 0;
        let mut failures = 0;
        for (dataset, _) in &suite {
            match execute_component(component, dataset) {
                Ok(_) => successes += 1,
                Err(_) => failures += 1,
            }
        }
        assert!(successes > 0, "{} never succeeds", component.id);
        if component.id == "ReplaceMissingValues" {
            assert_eq!(failures, 0, "ReplaceMissingValues is expected to be total");
        } else {
            assert!(failures > 0, "{} never fails", component.id);
        }
    }
}

#[test]
fn unknown_component_execution_fails() {
    let fake = ComponentDescriptor {
        id: "Mystery".into(),
        kind: ComponentKind::Filter,
        category: Category::DataTransformation,
        hyperparameters: Default::default(),
    };
    let d = crate::fixtures::gcredit_shaped("t", 10, 12);
    assert!(matches!(
        execute_component(&fake, &d),
        Err(ExecutionError::UnknownComponent(_))
    ));
}
