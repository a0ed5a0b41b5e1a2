use kneading_core::cli::{scan, scan_row, ScanParams};
use kneading_core::maps::Family;

fn params(laps: usize) -> ScanParams {
    ScanParams {
        family: "g_beta".into(),
        from: 3.1,
        to: 3.2,
        step: 0.01,
        laps,
        depth: 200,
        eps: 1e-9,
    }
}

#[test]
fn lap_growth_approaches_kneading_growth() {
    for fam in [
        Family::GBeta { beta: 3.16 },
        Family::GAlpha {
            alpha: (5f64.sqrt() - 1.0) / 4.0,
        },
    ] {
        let gaps: Vec<f64> = [6, 10, 14]
            .iter()
            .map(|&n| {
                let row = scan_row(&fam, &params(n));
                assert_eq!(row.status, "ok", "{fam}");
                (row.rho_laps.unwrap() - row.rho_kneading.unwrap()).abs()
            })
            .collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{fam}: {gaps:?}");
        assert!(gaps[2] < 0.15, "{fam}: {gaps:?}");
    }
}

#[test]
fn rows_come_back_in_parameter_order() {
    let rows = scan(&params(6)).unwrap();
    assert_eq!(rows.len(), 11);
    assert!(rows.windows(2).all(|w| w[0].param < w[1].param));
    let at = rows.iter().find(|r| r.param == 3.16).unwrap();
    assert_eq!((at.word.as_str(), at.period), ("RMR", Some(3)));
}

#[test]
fn bad_parameters_become_error_rows() {
    let row = scan_row(&Family::GBeta { beta: 1.0 }, &params(4));
    assert!(row.status.starts_with("error:"), "{}", row.status);
}
