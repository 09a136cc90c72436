macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                run_example().expect(stringify!($name));
            }
        }
    };
}

example!(predict_rba);
example!(forward_region);
example!(camshift_tracking);
example!(gpsr_void);
example!(leach_election);
example!(simulate_network);
example!(experiment_matrix);
