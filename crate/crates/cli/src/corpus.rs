//! Scenarios shipped with the binary.

pub struct Bundled {
    pub name: &'static str,
    pub text: &'static str,
    pub expected_exit: u8,
}

macro_rules! bundled {
    ($name:literal, $exit:expr) => {
        Bundled { name: $name, text: include_str!(concat!("../scenarios/", $name)), expected_exit: $exit }
    };
}

pub const BUNDLED: &[Bundled] = &[
    bundled!("p1_commutative.json", 0),
    bundled!("m2z_riemann_roch.json", 0),
    bundled!("gaussian_duality.json", 0),
    bundled!("lipschitz_duality.json", 0),
    bundled!("torsion_z6.json", 0),
    bundled!("zxz_negative_control.json", 0),
    bundled!("nonassociative_order.json", 1),
];

pub fn find(name: &str) -> Option<&'static Bundled> {
    let name = name.strip_prefix("bundled:").unwrap_or(name);
    BUNDLED.iter().find(|b| b.name == name || b.name.trim_end_matches(".json") == name)
}
