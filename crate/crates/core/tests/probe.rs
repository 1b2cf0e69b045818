#[test]
fn lapack_links() {
    let v = semikit::linalg::probe();
    assert!(v.is_finite());
}
