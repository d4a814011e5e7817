use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::ViewError;
use crate::model::{EventSpace, SpaceKind};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    /// Hue angle in degrees, [0, 360).
    pub fn hue(self) -> f64 {
        let (r, g, b) = (self.0 as f64 / 255.0, self.1 as f64 / 255.0, self.2 as f64 / 255.0);
        let max = r.max(g).max(b);
        let min = r.min(g).min(b);
        let d = max - min;
        if d == 0.0 {
            return 0.0;
        }
        let h = if max == r {
            ((g - b) / d).rem_euclid(6.0)
        } else if max == g {
            (b - r) / d + 2.0
        } else {
            (r - g) / d + 4.0
        };
        h * 60.0
    }
}

/// Shortest angular distance between two hues.
pub fn hue_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(360.0);
    d.min(360.0 - d)
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02X}{:02X}{:02X}", self.0, self.1, self.2)
    }
}

impl FromStr for Rgb {
    type Err = ViewError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let hex = s.strip_prefix('#').unwrap_or(s);
        if hex.len() != 6 || !hex.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(ViewError::Color(s.to_owned()));
        }
        let byte = |i: usize| u8::from_str_radix(&hex[i..i + 2], 16).expect("validated hex");
        Ok(Rgb(byte(0), byte(2), byte(4)))
    }
}

impl Serialize for Rgb {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rgb {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub const PALETTE_SIZE: usize = 6;

/// Six distinct colors. Categorical spaces take them in palette order;
/// ordered spaces take the blue-to-red subset as a ramp.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<Rgb>", into = "Vec<Rgb>")]
pub struct Palette {
    colors: [Rgb; PALETTE_SIZE],
}

impl Palette {
    pub fn new(colors: Vec<Rgb>) -> Result<Self, ViewError> {
        let colors: [Rgb; PALETTE_SIZE] = colors
            .try_into()
            .map_err(|v: Vec<Rgb>| ViewError::Palette(format!("need {PALETTE_SIZE} colors, got {}", v.len())))?;
        for (i, a) in colors.iter().enumerate() {
            if colors[i + 1..].contains(a) {
                return Err(ViewError::Palette(format!("color {a} appears twice")));
            }
        }
        Ok(Palette { colors })
    }

    pub fn colors(&self) -> &[Rgb] {
        &self.colors
    }

    /// Colors whose hue lies on the warm arc from blue (240°) down through
    /// yellow to red (about -10°), ordered from the blue end.
    pub fn ramp(&self) -> Vec<Rgb> {
        let from_blue = |c: &Rgb| (240.0 - c.hue()).rem_euclid(360.0);
        let mut ramp: Vec<Rgb> = self.colors.iter().copied().filter(|c| from_blue(c) <= 250.0).collect();
        if ramp.len() < 2 {
            ramp = self.colors.to_vec();
        }
        ramp.sort_by(|a, b| from_blue(a).total_cmp(&from_blue(b)));
        ramp
    }
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            colors: [
                Rgb(0x4C, 0x72, 0xB0),
                Rgb(0xDD, 0x84, 0x52),
                Rgb(0x55, 0xA8, 0x68),
                Rgb(0xC4, 0x4E, 0x52),
                Rgb(0x81, 0x72, 0xB3),
                Rgb(0xCC, 0xB9, 0x74),
            ],
        }
    }
}

impl TryFrom<Vec<Rgb>> for Palette {
    type Error = ViewError;

    fn try_from(v: Vec<Rgb>) -> Result<Self, Self::Error> {
        Palette::new(v)
    }
}

impl From<Palette> for Vec<Rgb> {
    fn from(p: Palette) -> Self {
        p.colors.to_vec()
    }
}

/// One color per value of the space, in value order. Depends only on the
/// space's kind and size, so equal spaces always get equal colors.
pub fn assign_colors(space: &EventSpace, palette: &Palette) -> Vec<Rgb> {
    let k = space.len();
    match space.kind {
        SpaceKind::Categorical => (0..k).map(|i| palette.colors[i % PALETTE_SIZE]).collect(),
        SpaceKind::Ordered => {
            let ramp = palette.ramp();
            let m = ramp.len();
            if k == 1 {
                return vec![ramp[0]];
            }
            if k <= m {
                // spread evenly from the blue end to the red end
                (0..k)
                    .map(|i| ramp[((i * (m - 1)) as f64 / (k - 1) as f64).round() as usize])
                    .collect()
            } else {
                (0..k).map(|i| ramp[i % m]).collect()
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hex_round_trip() {
        let c: Rgb = "#4C72B0".parse().unwrap();
        assert_eq!(c, Rgb(0x4C, 0x72, 0xB0));
        assert_eq!(c.to_string(), "#4C72B0");
        assert!("#4C72B".parse::<Rgb>().is_err());
    }

    #[test]
    fn hue_of_primaries() {
        assert_eq!(Rgb(255, 0, 0).hue(), 0.0);
        assert_eq!(Rgb(0, 255, 0).hue(), 120.0);
        assert_eq!(Rgb(0, 0, 255).hue(), 240.0);
        assert_eq!(hue_distance(350.0, 10.0), 20.0);
    }

    #[test]
    fn palette_must_have_six_distinct_colors() {
        assert!(Palette::new(vec![Rgb(0, 0, 0); 5]).is_err());
        let mut dup = Palette::default().colors().to_vec();
        dup[5] = dup[0];
        assert!(Palette::new(dup).is_err());
    }

    #[test]
    fn binary_spaces_share_the_first_two_colors() {
        let p = Palette::default();
        let a = assign_colors(&EventSpace::categorical("a", &["True", "False"]), &p);
        let b = assign_colors(&EventSpace::categorical("b", &["True", "False"]), &p);
        assert_eq!(a, [p.colors()[0], p.colors()[1]]);
        assert_eq!(a, b);
    }

    #[test]
    fn ordered_spaces_step_from_blue_to_red() {
        let p = Palette::default();
        let colors = assign_colors(&EventSpace::ordered("flow", &["low", "medium", "high", "jam"]), &p);
        assert_eq!(
            colors.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
            ["#4C72B0", "#55A868", "#DD8452", "#C44E52"]
        );
        let from_blue: Vec<f64> = colors.iter().map(|c| (240.0 - c.hue()).rem_euclid(360.0)).collect();
        assert!(from_blue.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn large_spaces_cycle() {
        let p = Palette::default();
        let values: Vec<String> = (0..15).map(|i| format!("v{i}")).collect();
        let colors = assign_colors(&EventSpace::categorical("big", &values), &p);
        assert_eq!(colors.len(), 15);
        assert_eq!(colors[6], colors[0]);
        assert_eq!(colors[14], colors[2]);
    }

    #[test]
    fn categorical_neighbours_are_far_apart() {
        let p = Palette::default();
        let values: Vec<String> = (0..12).map(|i| format!("v{i}")).collect();
        let colors = assign_colors(&EventSpace::categorical("big", &values), &p);
        for w in colors.windows(2) {
            assert!(hue_distance(w[0].hue(), w[1].hue()) >= 60.0, "{} {}", w[0], w[1]);
        }
    }
}
