use std::env;
use std::fs;
use std::path::PathBuf;

fn main() {
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");

    let crate_dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").expect("CARGO_MANIFEST_DIR"));
    let config = cbindgen::Config::from_file(crate_dir.join("cbindgen.toml"))
        .expect("reading cbindgen.toml");
    let bindings = cbindgen::Builder::new()
        .with_crate(&crate_dir)
        .with_config(config)
        .generate()
        .expect("generating qmh.h");

    let out_dir = PathBuf::from(env::var("OUT_DIR").expect("OUT_DIR"));
    bindings.write_to_file(out_dir.join("qmh.h"));

    // Also drop a copy where C consumers can find it without digging
    // through build hashes. The path is stable because the crate lives
    // at crates/capi inside the workspace.
    let include_dir = crate_dir.join("../../target/include");
    fs::create_dir_all(&include_dir).expect("creating target/include");
    bindings.write_to_file(include_dir.join("qmh.h"));
}
