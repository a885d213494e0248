macro_rules! example {
    ($module:ident, $file:literal) => {
        #[allow(dead_code)]
        mod $module {
            include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/", $file));
        }

        #[test]
        fn $module() {
            $module::run_example().expect($file);
        }
    };
}

example!(gap_sets, "gap_sets.rs");
example!(one_section, "one_section.rs");
example!(hyperelliptic_ekz, "hyperelliptic_ekz.rs");
example!(hn_recursion, "hn_recursion.rs");
example!(low_genus_tables, "low_genus_tables.rs");
example!(bounds, "bounds.rs");
example!(sum_report, "sum_report.rs");
