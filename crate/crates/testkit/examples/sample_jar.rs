//! Writes the sample fixture archive: `cargo run -p callnet-testkit --example sample_jar -- out.jar`

fn main() {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "sample.jar".into());
    callnet_testkit::write_jar(path.as_ref(), &callnet_testkit::sample_jar_entries())
        .expect("write jar");
    println!("{path}");
}
