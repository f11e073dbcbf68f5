use std::ffi::{CStr, CString};
use std::process::Command;
use std::ptr;

use rankare_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> Option<String> {
    let p = rankare_last_error_message();
    (!p.is_null()).then(|| unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned())
}

fn density(spec: &str) -> *mut RankareDensity {
    let mut d = ptr::null_mut();
    let st = unsafe { rankare_density_parse(cstr(spec).as_ptr(), &mut d) };
    assert_eq!(st, RankareStatus::Ok, "{spec}: {:?}", last_error());
    d
}

fn score(spec: &str) -> *mut RankareScore {
    let mut j = ptr::null_mut();
    let st = unsafe { rankare_score_parse(cstr(spec).as_ptr(), &mut j) };
    assert_eq!(st, RankareStatus::Ok, "{spec}: {:?}", last_error());
    j
}

#[test]
fn version_matches_crate() {
    let v = unsafe { CStr::from_ptr(rankare_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn density_round_trip() {
    let d = density("gaussian");
    let (mut p, mut c, mut q) = (0.0, 0.0, 0.0);
    unsafe {
        assert_eq!(rankare_density_pdf(d, 0.0, &mut p), RankareStatus::Ok);
        assert_eq!(rankare_density_cdf(d, 1.0, &mut c), RankareStatus::Ok);
        assert_eq!(rankare_density_quantile(d, c, &mut q), RankareStatus::Ok);
        rankare_density_free(d);
    }
    assert!((p - 1.0 / (2.0 * std::f64::consts::PI).sqrt()).abs() < 1e-15);
    assert!((q - 1.0).abs() < 1e-12);
}

#[test]
fn errors_map_to_status_and_message() {
    let mut d = ptr::null_mut();
    let st = unsafe { rankare_density_parse(cstr("student:-1").as_ptr(), &mut d) };
    assert_eq!(st, RankareStatus::Domain);
    assert!(d.is_null());
    assert!(last_error().unwrap().contains("domain"));

    let st = unsafe { rankare_density_parse(cstr("nonsense").as_ptr(), &mut d) };
    assert_eq!(st, RankareStatus::Parse);

    let g = density("gaussian");
    let mut q = 0.0;
    assert_eq!(unsafe { rankare_density_quantile(g, 1.5, &mut q) }, RankareStatus::Domain);
    // A successful call clears the message.
    assert_eq!(unsafe { rankare_density_quantile(g, 0.5, &mut q) }, RankareStatus::Ok);
    assert!(last_error().is_none());
    unsafe { rankare_density_free(g) };
}

#[test]
fn null_pointers_are_rejected() {
    let mut v = 0.0;
    unsafe {
        assert_eq!(rankare_density_pdf(ptr::null(), 0.0, &mut v), RankareStatus::NullPointer);
        assert_eq!(rankare_score_parse(ptr::null(), ptr::null_mut()), RankareStatus::NullPointer);
        assert_eq!(
            rankare_score_parse(cstr("vdw").as_ptr(), ptr::null_mut()),
            RankareStatus::NullPointer
        );
        assert_eq!(rankare_hl_limit(1.0, RankareQuantity::C, ptr::null_mut()), RankareStatus::NullPointer);
        rankare_density_free(ptr::null_mut());
        rankare_score_free(ptr::null_mut());
    }
}

#[test]
fn wilcoxon_vs_vdw_under_gaussian() {
    let (w, v, f) = (score("wilcoxon"), score("vdw"), density("gaussian"));
    let mut r = RankareAreReport {
        c_f: 0.0,
        d_f: 0.0,
        k_ratio_nonserial: 0.0,
        k_ratio_serial: 0.0,
        are: 0.0,
        abs_err: 0.0,
        serial: true,
        outside_f2: true,
    };
    unsafe {
        assert_eq!(rankare_are_nonserial(w, v, f, 1e-10, &mut r), RankareStatus::Ok);
        assert!((r.are - 3.0 / std::f64::consts::PI).abs() < 1e-8);
        assert!(r.d_f.is_nan() && !r.serial);

        assert_eq!(rankare_are_serial(w, w, v, v, f, 1e-10, &mut r), RankareStatus::Ok);
        assert!((r.are - 9.0 / std::f64::consts::PI.powi(2)).abs() < 1e-8);
        assert!(r.serial && !r.outside_f2);
        rankare_score_free(w);
        rankare_score_free(v);
        rankare_density_free(f);
    }
}

#[test]
fn hl_limit_passes_through() {
    let mut v = 0.0;
    assert_eq!(unsafe { rankare_hl_limit(100.0, RankareQuantity::Are, &mut v) }, RankareStatus::Ok);
    assert!((v - 3.0 / std::f64::consts::PI).abs() < 1e-4);
}

#[test]
fn autocorrelation_from_array() {
    let x = [0.3, 1.2, -0.5, 2.0, 0.7, 1.1, -1.4];
    let mut out = RankareAutocorr {
        lag: 0,
        raw: 0.0,
        mean: 0.0,
        sd: 0.0,
        standardized: 0.0,
        exact: false,
    };
    let st = unsafe { rankare_autocorr(x.as_ptr(), x.len(), 1, cstr("vdw").as_ptr(), &mut out) };
    assert_eq!(st, RankareStatus::Ok);
    assert_eq!(out.lag, 1);
    assert!(out.exact);
    let via_scores = {
        let v = score("vdw");
        let mut o = out;
        let st = unsafe { rankare_rank_autocorr(x.as_ptr(), x.len(), 1, v, v, &mut o) };
        unsafe { rankare_score_free(v) };
        assert_eq!(st, RankareStatus::Ok);
        o
    };
    assert_eq!(out, via_scores);

    let tied = [1.0, 2.0, 1.0, 3.0];
    let st = unsafe { rankare_autocorr(tied.as_ptr(), tied.len(), 1, cstr("sww").as_ptr(), &mut out) };
    assert_eq!(st, RankareStatus::Ties);
}

#[test]
fn header_compiles_as_c() {
    let header = concat!(env!("CARGO_MANIFEST_DIR"), "/include/rankare.h");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".into());
    let dir = tempdir();
    let src = dir.join("probe.c");
    std::fs::write(
        &src,
        format!(
            "#include \"{header}\"\nint probe(void) {{ RankareDensity *d = 0; \
             return (int)rankare_density_parse(\"gaussian\", &d) + RANKARE_STATUS_PANIC; }}\n"
        ),
    )
    .unwrap();
    let status = match Command::new(&cc).args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only"]).arg(&src).status() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("skipping: no C compiler ({cc}: {e})");
            return;
        }
    };
    assert!(status.success());
}

fn tempdir() -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("rankare-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}
