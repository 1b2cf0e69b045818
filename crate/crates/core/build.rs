fn main() {
    // System OpenBLAS bundles BLAS, CBLAS and LAPACK.
    println!("cargo:rustc-link-lib=dylib=openblas");
    println!("cargo:rustc-link-lib=dylib=gfortran");
}
