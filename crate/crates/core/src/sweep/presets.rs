/// A named extreme-inlining recipe.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Preset {
    pub name: &'static str,
    pub description: &'static str,
    pub frontend: &'static [&'static str],
    /// Passed to the optimizer via `-mllvm`.
    pub middle_end: &'static [(&'static str, i64)],
}

pub const PRESETS: &[Preset] = &[
    Preset {
        name: "extreme-coreutils-style",
        description: "full LTO with a very large inline threshold",
        frontend: &["-O3", "-flto=full"],
        middle_end: &[("-inline-threshold", 200_000)],
    },
    Preset {
        name: "oz-threshold-2225",
        description: "size-optimized build with a raised inline threshold",
        frontend: &["-Oz"],
        middle_end: &[("-inline-threshold", 2225)],
    },
    Preset {
        name: "o3-threshold-2225",
        description: "augmentation variant: -O3 with a raised inline threshold",
        frontend: &["-O3"],
        middle_end: &[("-inline-threshold", 2225)],
    },
    Preset {
        name: "o3-lto-full",
        description: "-O3 with full LTO",
        frontend: &["-O3", "-flto=full"],
        middle_end: &[],
    },
    Preset {
        name: "o3",
        description: "plain -O3",
        frontend: &["-O3"],
        middle_end: &[],
    },
    Preset {
        name: "mirai-style",
        description: "-O2 with an extreme inline threshold",
        frontend: &["-O2"],
        middle_end: &[("-inline-threshold", 500_225)],
    },
    Preset {
        name: "gafgyt-style",
        description: "-O2 with an extreme inline threshold and full LTO",
        frontend: &["-O2", "-flto=full"],
        middle_end: &[("-inline-threshold", 500_225)],
    },
];

pub fn preset(name: &str) -> Option<&'static Preset> {
    PRESETS.iter().find(|p| p.name == name)
}

impl Preset {
    /// The recipe as usually written, e.g. `-O3 -flto=full -inline-threshold=200000`.
    pub fn recipe(&self) -> String {
        let mut parts: Vec<String> = self.frontend.iter().map(|s| s.to_string()).collect();
        parts.extend(self.middle_end.iter().map(|(n, v)| format!("{n}={v}")));
        parts.join(" ")
    }

    /// Compiler arguments with optimizer options wrapped in `-mllvm`.
    pub fn flags(&self) -> Vec<String> {
        let mut out: Vec<String> = self.frontend.iter().map(|s| s.to_string()).collect();
        for (n, v) in self.middle_end {
            out.push("-mllvm".into());
            out.push(format!("{n}={v}"));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coreutils_recipe() {
        let p = preset("extreme-coreutils-style").unwrap();
        assert_eq!(p.recipe(), "-O3 -flto=full -inline-threshold=200000");
        assert_eq!(p.flags(), ["-O3", "-flto=full", "-mllvm", "-inline-threshold=200000"]);
        assert_eq!(
            preset("oz-threshold-2225").unwrap().recipe(),
            "-Oz -inline-threshold=2225"
        );
    }
}
