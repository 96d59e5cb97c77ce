use std::path::Path;

use k3fix::classifier::{build_table, emit_table, Classifier, TableKind, PURELY_ORDERS};
use k3fix::elliptic::{load_registry, verify_entry, verify_example, ExampleStatus};
use k3fix::{DataStore, Error, Format};

fn data_dir() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data"))
}

#[test]
fn every_fixture_is_reproduced() {
    let c = Classifier::new(DataStore::embedded().unwrap());
    let mut seen = Vec::new();
    let mut runs: Vec<(k3fix::Classification, Vec<TableKind>)> = Vec::new();
    for n in PURELY_ORDERS {
        runs.push((c.classify_purely(n).unwrap(), TableKind::for_purely(n)));
    }
    for (n, k) in [(14, 2), (14, 7), (21, 3)] {
        runs.push((c.classify_not_purely(n, k).unwrap(), TableKind::for_not_purely(n, k)));
    }
    for (cl, kinds) in &runs {
        for &kind in kinds {
            let fx = c.data().fixture(&kind.name()).unwrap();
            let (_, report) = emit_table(cl, kind, Format::Markdown, Some(fx));
            let report = report.unwrap();
            assert!(report.passed, "{}: {:?}", report.table, report.diffs);
            seen.push(kind.name());
        }
    }
    seen.sort();
    let mut all: Vec<String> = c.data().fixtures.keys().cloned().collect();
    all.sort();
    assert_eq!(seen, all, "some fixture is never checked");
}

#[test]
fn waivers_are_the_documented_ones() {
    let d = DataStore::embedded().unwrap();
    let waived: Vec<(String, usize)> = d
        .fixtures
        .values()
        .flat_map(|f| f.waivers.iter().map(move |w| (f.table.clone(), w.row)))
        .collect();
    assert_eq!(
        waived,
        vec![
            ("order14_dims".into(), 7),
            ("order14_dims".into(), 19),
            ("order28_dims".into(), 3)
        ]
    );
}

#[test]
fn check_reports_a_changed_cell() {
    let c = Classifier::new(DataStore::embedded().unwrap());
    let cl = c.classify_purely(21).unwrap();
    let mut fx = c.data().fixture("order21_purely_final").unwrap().clone();
    fx.rows[0][1] = "9pts".into();
    let r = build_table(TableKind::Order21PurelyFinal, &cl).check(&fx);
    assert!(!r.passed);
    assert_eq!(r.diffs.len(), 1);
}

#[test]
fn json_uses_record_field_names() {
    let c = Classifier::new(DataStore::embedded().unwrap());
    let cl = c.classify_purely(42).unwrap();
    let v = serde_json::to_value(&cl.records[0]).unwrap();
    for key in [
        "order",
        "mode",
        "label",
        "base",
        "type_counts",
        "dims",
        "euler",
        "ns",
        "status",
        "loci",
    ] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    let (csv, _) = emit_table(&cl, TableKind::Order42PurelyFinal, Format::Csv, None);
    assert!(csv.starts_with("case,fix42,fix7,fix21,fix3\n"));
}

#[test]
fn data_directory_matches_embedded_copy() {
    let disk = DataStore::from_dir(data_dir()).unwrap();
    let emb = DataStore::embedded().unwrap();
    for name in k3fix::data::file_names() {
        assert_eq!(disk.raw(name), emb.raw(name), "{name}");
    }
}

#[test]
fn unsupported_inputs() {
    let c = Classifier::new(DataStore::embedded().unwrap());
    assert_eq!(c.classify_purely(13).unwrap_err(), Error::UnsupportedOrder(13));
    assert!(matches!(c.classify_not_purely(14, 3), Err(Error::Invalid(_))));
    assert_eq!(c.classify_not_purely(28, 2).unwrap_err(), Error::NoSymplectic(14));
    assert_eq!(c.classify_not_purely(42, 3).unwrap_err(), Error::NoSymplectic(14));
}

#[test]
fn registry_verification() {
    let d = DataStore::embedded().unwrap();
    let reg = load_registry(&d).unwrap();
    let ids: std::collections::BTreeSet<_> = reg.iter().map(|e| e.id.as_str()).collect();
    assert_eq!(ids.len(), reg.len(), "duplicate ids");
    for seed in [0, 1, 99] {
        for e in &reg {
            let r = verify_entry(e, seed);
            assert_ne!(r.status, ExampleStatus::Fail, "{r}");
        }
    }
    let r = verify_example(&d, "C1(6,1)", 3).unwrap();
    assert_eq!(r.status, ExampleStatus::Pass);
    assert_eq!(r, verify_example(&d, "C1(6,1)", 3).unwrap());
    let r = verify_example(&d, "D2", 0).unwrap();
    assert_eq!(r.status, ExampleStatus::Skipped);
    assert!(r.notes[0].contains("weighted projective"));
    assert!(matches!(verify_example(&d, "Z9", 0), Err(Error::UnknownExample(_))));
}

#[test]
fn wrong_expectations_fail() {
    let d = DataStore::embedded().unwrap();
    let reg = load_registry(&d).unwrap();
    let mut e = reg.iter().find(|e| e.id == "C3(6,2)").unwrap().clone();
    e.auto.as_mut().unwrap().t = vec![(7, 3)];
    let r = verify_entry(&e, 0);
    assert_eq!(r.status, ExampleStatus::Fail);
    assert!(r.diffs[0].contains("not invariant"), "{r}");
    let mut e = reg.iter().find(|e| e.id == "B3").unwrap().clone();
    e.fibers.insert("II*".into(), 2);
    assert_eq!(verify_entry(&e, 0).status, ExampleStatus::Fail);
    let mut e = reg.iter().find(|e| e.id == "np14:C").unwrap().clone();
    e.purely = Some(true);
    assert_eq!(verify_entry(&e, 0).status, ExampleStatus::Fail);
}
