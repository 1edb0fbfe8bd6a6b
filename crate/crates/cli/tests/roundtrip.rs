use clap::Parser;
use proptest::prelude::*;
use serde::de::DeserializeOwned;
use serde::Serialize;
use string_geodesics_cli::args::Cli;
use string_geodesics_cli::commands::{ClassifyData, ResiduesData, TraceData};
use string_geodesics_cli::output::Document;

fn document(args: &[String]) -> String {
    let mut all = vec!["string-geodesics".to_string()];
    all.extend_from_slice(args);
    let cli = Cli::try_parse_from(all).expect("arguments parse");
    string_geodesics_cli::run(&cli.command).expect("command runs").document
}

fn check<T: Serialize + DeserializeOwned + PartialEq + std::fmt::Debug>(text: &str) {
    let doc: Document<T> = serde_json::from_str(text).unwrap();
    assert_eq!(doc.to_json().unwrap(), text);
    assert_eq!(serde_json::from_str::<Document<T>>(&doc.to_json().unwrap()).unwrap(), doc);
}

fn strs(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn classify_round_trips(h in 0.01f64..10.0, u in -3.0f64..3.0) {
        let args = strs(&["classify", "--H", &h.to_string(), "--U", &u.to_string()]);
        let a = document(&args);
        check::<ClassifyData>(&a);
        prop_assert_eq!(a, document(&args));
    }

    #[test]
    fn residues_round_trip(h in 0.1f64..5.0, ratio in 0.01f64..2.0, eps in prop::sample::select(vec![1i8, -1])) {
        let u = (ratio * h).sqrt();
        prop_assume!((8.0 * h - 27.0 * u * u).abs() > 1e-3);
        let args = strs(&["residues", "--H", &h.to_string(), "--U", &u.to_string(), "--epsilon", &eps.to_string()]);
        let a = document(&args);
        check::<ResiduesData>(&a);
        prop_assert_eq!(a, document(&args));
    }

    #[test]
    fn trace_round_trips(u in 0.3f64..2.0, w in 0.7f64..3.0, span in 1.0f64..20.0) {
        let args = strs(&[
            "trace", "--H2", "1", "--U", &u.to_string(), "--start", &format!("0,{w}"), "--span", &format!("0,{span}"),
        ]);
        let a = document(&args);
        check::<TraceData>(&a);
        prop_assert_eq!(a, document(&args));
    }
}
