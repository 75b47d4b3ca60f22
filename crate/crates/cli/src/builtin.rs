//! Scenarios shipped with the tool. Their parameter choices are documented
//! in the files themselves.

pub struct Builtin {
    pub name: &'static str,
    pub text: &'static str,
}

pub const BUILTINS: [Builtin; 4] = [
    Builtin { name: "fig2", text: include_str!("../scenarios/fig2.toml") },
    Builtin { name: "fig3", text: include_str!("../scenarios/fig3.toml") },
    Builtin { name: "fig4", text: include_str!("../scenarios/fig4.toml") },
    Builtin { name: "fig5", text: include_str!("../scenarios/fig5.toml") },
];

pub fn builtin(name: &str) -> Option<&'static Builtin> {
    BUILTINS.iter().find(|b| b.name == name)
}
