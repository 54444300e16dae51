//! Built-in reference materials, one per elastic symmetry class.

use std::fmt;
use std::str::FromStr;

use crate::elasticity::VoigtStiffness;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Material {
    Kio3,
    CoTeO4,
    Te2W,
    Ta2C,
    Si,
    MoN,
    Spinel,
    Pyroceram9608,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SymmetryClass {
    Triclinic,
    Monoclinic,
    Orthotropic,
    Trigonal,
    Tetragonal,
    TransverselyIsotropic,
    Cubic,
    Isotropic,
}

impl SymmetryClass {
    pub fn label(self) -> &'static str {
        match self {
            SymmetryClass::Triclinic => "triclinic",
            SymmetryClass::Monoclinic => "monoclinic",
            SymmetryClass::Orthotropic => "orthotropic",
            SymmetryClass::Trigonal => "trigonal",
            SymmetryClass::Tetragonal => "tetragonal",
            SymmetryClass::TransverselyIsotropic => "transversely isotropic",
            SymmetryClass::Cubic => "cubic",
            SymmetryClass::Isotropic => "isotropic",
        }
    }
}

const KIO3: [[f64; 6]; 6] = [
    [43.0, 11.0, 13.0, 1.0, -2.0, 2.0],
    [11.0, 35.0, 12.0, 3.0, -1.0, 3.0],
    [13.0, 12.0, 43.0, 2.0, -2.0, 1.0],
    [1.0, 3.0, 2.0, 13.0, 0.0, 0.0],
    [-2.0, -1.0, -2.0, 0.0, 13.0, 1.0],
    [2.0, 3.0, 1.0, 0.0, 1.0, 12.0],
];

const COTEO4: [[f64; 6]; 6] = [
    [135.0, 19.0, 54.0, 0.0, 0.0, 42.0],
    [19.0, 13.0, 15.0, 0.0, 0.0, 6.0],
    [54.0, 15.0, 269.0, 0.0, 0.0, 18.0],
    [0.0, 0.0, 0.0, 14.0, 25.0, 0.0],
    [0.0, 0.0, 0.0, 25.0, 66.0, 0.0],
    [42.0, 6.0, 18.0, 0.0, 0.0, 18.0],
];

const TE2W: [[f64; 6]; 6] = [
    [143.0, 1.0, 37.0, 0.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 0.0, 0.0, 0.0],
    [37.0, 3.0, 102.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 2.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 46.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 1.0],
];

const TA2C: [[f64; 6]; 6] = [
    [464.0, 159.0, 141.0, -45.0, 0.0, 0.0],
    [159.0, 464.0, 141.0, 45.0, 0.0, 0.0],
    [141.0, 141.0, 493.0, 0.0, 0.0, 0.0],
    [-45.0, 45.0, 0.0, 125.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 125.0, -45.0],
    [0.0, 0.0, 0.0, 0.0, -45.0, 153.0],
];

const SI: [[f64; 6]; 6] = [
    [212.0, 70.0, 58.0, 0.0, 0.0, 0.0],
    [70.0, 212.0, 58.0, 0.0, 0.0, 0.0],
    [58.0, 58.0, 179.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 58.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 58.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 85.0],
];

const MON: [[f64; 6]; 6] = [
    [499.0, 177.0, 235.0, 0.0, 0.0, 0.0],
    [177.0, 499.0, 235.0, 0.0, 0.0, 0.0],
    [235.0, 235.0, 714.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 241.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 241.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 161.0],
];

const SPINEL: [[f64; 6]; 6] = [
    [252.0, 145.0, 145.0, 0.0, 0.0, 0.0],
    [145.0, 252.0, 145.0, 0.0, 0.0, 0.0],
    [145.0, 145.0, 252.0, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 142.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 142.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 142.0],
];

const PYROCERAM: [[f64; 6]; 6] = [
    [103.2, 34.4, 34.4, 0.0, 0.0, 0.0],
    [34.4, 103.2, 34.4, 0.0, 0.0, 0.0],
    [34.4, 34.4, 103.2, 0.0, 0.0, 0.0],
    [0.0, 0.0, 0.0, 34.4, 0.0, 0.0],
    [0.0, 0.0, 0.0, 0.0, 34.4, 0.0],
    [0.0, 0.0, 0.0, 0.0, 0.0, 34.4],
];

impl Material {
    pub const ALL: [Material; 8] = [
        Material::Kio3,
        Material::CoTeO4,
        Material::Te2W,
        Material::Ta2C,
        Material::Si,
        Material::MoN,
        Material::Spinel,
        Material::Pyroceram9608,
    ];

    /// Canonical display name.
    pub fn name(self) -> &'static str {
        match self {
            Material::Kio3 => "KIO3",
            Material::CoTeO4 => "CoTeO4",
            Material::Te2W => "Te2W",
            Material::Ta2C => "Ta2C",
            Material::Si => "Si",
            Material::MoN => "MoN",
            Material::Spinel => "MgAl2O2",
            Material::Pyroceram9608 => "Pyroceram 9608",
        }
    }

    fn aliases(self) -> &'static [&'static str] {
        match self {
            Material::Kio3 => &["kio3", "triclinic"],
            Material::CoTeO4 => &["coteo4", "monoclinic"],
            Material::Te2W => &["te2w", "orthotropic"],
            Material::Ta2C => &["ta2c", "trigonal"],
            Material::Si => &["si", "tetragonal"],
            Material::MoN => &["mon", "transversely-isotropic", "transversely_isotropic"],
            Material::Spinel => &["mgal2o2", "spinel", "cubic"],
            Material::Pyroceram9608 => &[
                "pyroceram",
                "pyroceram9608",
                "pyroceram-9608",
                "pyroceram 9608",
                "isotropic",
            ],
        }
    }

    pub fn symmetry(self) -> SymmetryClass {
        match self {
            Material::Kio3 => SymmetryClass::Triclinic,
            Material::CoTeO4 => SymmetryClass::Monoclinic,
            Material::Te2W => SymmetryClass::Orthotropic,
            Material::Ta2C => SymmetryClass::Trigonal,
            Material::Si => SymmetryClass::Tetragonal,
            Material::MoN => SymmetryClass::TransverselyIsotropic,
            Material::Spinel => SymmetryClass::Cubic,
            Material::Pyroceram9608 => SymmetryClass::Isotropic,
        }
    }

    pub fn voigt(self) -> &'static [[f64; 6]; 6] {
        match self {
            Material::Kio3 => &KIO3,
            Material::CoTeO4 => &COTEO4,
            Material::Te2W => &TE2W,
            Material::Ta2C => &TA2C,
            Material::Si => &SI,
            Material::MoN => &MON,
            Material::Spinel => &SPINEL,
            Material::Pyroceram9608 => &PYROCERAM,
        }
    }

    pub fn stiffness(self) -> VoigtStiffness {
        VoigtStiffness::new(*self.voigt())
            .expect("catalog matrices are symmetric")
            .with_name(self.name())
    }
}

impl fmt::Display for Material {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown material `{0}`")]
pub struct UnknownMaterial(pub String);

impl FromStr for Material {
    type Err = UnknownMaterial;

    /// Case-insensitive; accepts the display name, the formula and the symmetry class.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        Material::ALL
            .into_iter()
            .find(|m| m.name().to_ascii_lowercase() == key || m.aliases().contains(&key.as_str()))
            .ok_or_else(|| UnknownMaterial(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spot_checks() {
        assert_eq!(Material::Kio3.stiffness().get(0, 0), 43.0);
        assert_eq!(Material::Ta2C.stiffness().get(0, 3), -45.0);
        assert_eq!(Material::MoN.stiffness().get(2, 2), 714.0);
    }

    #[test]
    fn every_matrix_is_symmetric() {
        for m in Material::ALL {
            let a = m.voigt();
            for (i, row) in a.iter().enumerate() {
                for (j, &x) in row.iter().enumerate() {
                    assert_eq!(x, a[j][i], "{m} ({i},{j})");
                }
            }
        }
    }

    #[test]
    fn names_resolve() {
        assert_eq!("KIO3".parse::<Material>().unwrap(), Material::Kio3);
        assert_eq!("pyroceram".parse::<Material>().unwrap(), Material::Pyroceram9608);
        assert_eq!("Pyroceram 9608".parse::<Material>().unwrap(), Material::Pyroceram9608);
        assert_eq!("spinel".parse::<Material>().unwrap(), Material::Spinel);
        assert_eq!("cubic".parse::<Material>().unwrap(), Material::Spinel);
        assert!("unobtainium".parse::<Material>().is_err());
        for m in Material::ALL {
            assert_eq!(m.name().parse::<Material>().unwrap(), m);
        }
    }
}
