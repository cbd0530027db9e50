use std::ffi::CStr;
use std::ptr;

use recolor_ffi::*;

fn last_error() -> String {
    let p = recolor_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn colors(c: *const RecolorColoring) -> Vec<u32> {
    let n = unsafe { recolor_coloring_len(c) };
    let mut buf = vec![0u32; n];
    assert_eq!(unsafe { recolor_coloring_copy(c, buf.as_mut_ptr(), n) }, RecolorStatus::Ok);
    buf
}

#[test]
fn planted_greedy_transform_verify() {
    unsafe {
        let (mut g, mut sigma) = (ptr::null_mut(), ptr::null_mut());
        assert_eq!(recolor_graph_planted(2000, 8, 6000, 3, &mut g, &mut sigma), RecolorStatus::Ok);
        assert_eq!((recolor_graph_n(g), recolor_graph_m(g)), (2000, 6000));

        let (mut t, mut end) = (ptr::null_mut(), ptr::null_mut());
        let st = recolor_greedy(g, sigma, RecolorSelector::Random, 11, &mut t, &mut end);
        assert_eq!(st, RecolorStatus::Ok);
        assert!(recolor_trace_len(t) > 0);
        assert_eq!(recolor_verify(g, t, ptr::null_mut()), RecolorStatus::Ok);

        let mut walk = ptr::null_mut();
        assert_eq!(recolor_transform(g, sigma, end, &mut walk), RecolorStatus::Ok);
        assert_eq!(recolor_verify(g, walk, ptr::null_mut()), RecolorStatus::Ok);

        // Replaying the copied moves reaches the target.
        let mut moves = vec![0u32; 2 * recolor_trace_len(walk)];
        assert_eq!(recolor_trace_copy(walk, moves.as_mut_ptr(), moves.len()), RecolorStatus::Ok);
        let mut current = colors(sigma);
        for mv in moves.chunks_exact(2) {
            current[mv[0] as usize] = mv[1];
        }
        assert_eq!(current, colors(end));

        recolor_trace_free(walk);
        recolor_trace_free(t);
        recolor_coloring_free(end);
        recolor_coloring_free(sigma);
        recolor_graph_free(g);
    }
}

#[test]
fn verify_reports_failing_step() {
    unsafe {
        let edges = [0u32, 1, 1, 2];
        let mut g = ptr::null_mut();
        assert_eq!(recolor_graph_from_edges(3, edges.as_ptr(), 2, &mut g), RecolorStatus::Ok);
        let mut start = ptr::null_mut();
        assert_eq!(recolor_coloring_new([0u32, 1, 0].as_ptr(), 3, &mut start), RecolorStatus::Ok);
        let moves = [0u32, 2, 1, 0];
        let mut t = ptr::null_mut();
        assert_eq!(recolor_trace_new(start, moves.as_ptr(), 2, &mut t), RecolorStatus::Ok);
        let mut step = 0usize;
        assert_eq!(recolor_verify(g, t, &mut step), RecolorStatus::VerifyFailed);
        assert_eq!(step, 1);
        assert!(last_error().starts_with("step 1: vertex 1 and neighbor"), "{}", last_error());
        recolor_trace_free(t);
        recolor_coloring_free(start);
        recolor_graph_free(g);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut g = ptr::null_mut();
        assert_eq!(recolor_graph_gnm(4, 7, 0, &mut g), RecolorStatus::Infeasible);
        assert!(g.is_null());
        assert!(last_error().contains("exceeds"));

        let self_loop = [2u32, 2];
        assert_eq!(recolor_graph_from_edges(3, self_loop.as_ptr(), 1, &mut g), RecolorStatus::InvalidArgument);
        assert_eq!(recolor_graph_from_edges(3, ptr::null(), 1, &mut g), RecolorStatus::NullPointer);
        assert_eq!(recolor_graph_gnm(4, 2, 0, ptr::null_mut()), RecolorStatus::NullPointer);

        let mut c = ptr::null_mut();
        assert_eq!(recolor_coloring_new([0u32, 1].as_ptr(), 2, &mut c), RecolorStatus::Ok);
        let mut small = [0u32; 1];
        assert_eq!(recolor_coloring_copy(c, small.as_mut_ptr(), 1), RecolorStatus::InvalidArgument);
        recolor_coloring_free(c);

        // Null handles are tolerated by the accessors and free functions.
        assert_eq!(recolor_graph_n(ptr::null()), 0);
        recolor_graph_free(ptr::null_mut());
        recolor_trace_free(ptr::null_mut());
    }
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/recolor.h")).unwrap();
    for name in [
        "recolor_last_error", "recolor_graph_from_edges", "recolor_graph_gnm", "recolor_graph_planted",
        "recolor_graph_free", "recolor_coloring_new", "recolor_coloring_copy", "recolor_greedy",
        "recolor_transform", "recolor_trace_new", "recolor_trace_copy", "recolor_verify", "recolor_trace_free",
        "RECOLOR_STATUS_VERIFY_FAILED", "typedef struct RecolorGraph RecolorGraph",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}
