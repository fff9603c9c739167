macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));

            #[test]
            fn runs() {
                run_example();
            }
        }
    };
}

example!(algebroid_from_differential);
example!(bv_operator);
example!(lie_algebra_homology);
example!(modular_class);
example!(poisson_bialgebroid);
example!(poisson_homology);
example!(question4_defect);
example!(document_suites);
example!(star_duality);
example!(triangular_dual);
