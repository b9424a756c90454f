//! CubeFunction and Spectrum files in JSON and binary form.

use cube_entropy::io::{
    function_from_bytes, function_to_bytes, function_to_json, read_function, spectrum_from_json, spectrum_to_json,
    write_function,
};
use cube_entropy::random::{random_nonneg, seeded_rng};
use cube_entropy::spectral::wht_forward;
use cube_entropy::Result;

fn main() -> Result<()> {
    let f = random_nonneg(2, &mut seeded_rng(10))?;
    println!("{}", function_to_json(&f));
    let bytes = function_to_bytes(&f);
    println!("binary: {} bytes, magic {:?}", bytes.len(), std::str::from_utf8(&bytes[..4]).unwrap_or("?"));
    assert_eq!(function_from_bytes(&bytes)?, f);

    let encoded = spectrum_to_json(&wht_forward(&f));
    println!("{encoded}");
    assert_eq!(spectrum_from_json(&encoded)?, wht_forward(&f));

    let dir = std::env::temp_dir();
    for name in ["cube_entropy_example.json", "cube_entropy_example.cubf"] {
        let path = dir.join(name);
        write_function(&path, &f)?;
        println!("{} round trip ok: {}", path.display(), read_function(&path)? == f);
        std::fs::remove_file(path)?;
    }
    Ok(())
}
