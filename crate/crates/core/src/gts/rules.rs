//! DSL sources of the bundled rewriting rules. Each one expects class `N`
//! and places `Node : N`, `Edge : N*N`.

pub const RULE_NAMES: [&str; 6] = ["R1", "R2", "R3", "R4", "R5", "R6"];

/// Transitive closure step: `a->b`, `b->c` and no `a->c` gives `a->c`.
pub const R1: &str = "
trans R1(n1, n2, n3);
arc in Edge -> R1 : <n1,n2> + <n2,n3>;
arc out R1 -> Edge : <n1,n2> + <n2,n3> + <n1,n3>;
arc inh Edge -o R1 : <n1,n3>;
";

/// Removes an isolated node.
pub const R2: &str = "
trans R2(n1);
arc in Node -> R2 : <n1>;
arc inh Edge -o R2 : <n1,All> + <All-n1,n1>;
";

/// Adds a self-loop to a node without successors.
pub const R3: &str = "
trans R3(n1);
arc in Node -> R3 : <n1>;
arc out R3 -> Node : <n1>;
arc out R3 -> Edge : <n1,n1>;
arc inh Edge -o R3 : <n1,All>;
";

/// Replaces the self-loop on `n1` by a pair of edges to and from a fresh `n2`.
pub const R4: &str = "
trans R4(n1, n2) [n1 != n2];
arc in Edge -> R4 : <n1,n1>;
arc out R4 -> Edge : <n1,n2> + <n2,n1>;
arc out R4 -> Node : <n2>;
arc inh Node -o R4 : <n2>;
";

/// `n1` whose only successor is `n2`, where `n2` has nothing but a self-loop:
/// drops `n2` and puts a self-loop on `n1`.
pub const R5: &str = "
trans R5(n1, n2) [n1 != n2];
arc in Edge -> R5 : <n1,n2> + <n2,n2>;
arc in Node -> R5 : <n2>;
arc out R5 -> Edge : <n1,n1>;
arc inh Edge -o R5 : <n1,All-n2> + <n2,All-n2> + <All-n1-n2,n2>;
";

/// Turns the 2-cycle `n1 <-> n2` into the 3-cycle through a fresh `n3`.
pub const R6: &str = "
trans R6(n1, n2, n3) [n1 != n2 && n2 != n3 && n1 != n3];
arc in Edge -> R6 : <n1,n2> + <n2,n1>;
arc out R6 -> Edge : <n1,n2> + <n2,n3> + <n3,n1>;
arc out R6 -> Node : <n3>;
arc inh Node -o R6 : <n3>;
";

pub fn rule_source(name: &str) -> Option<&'static str> {
    Some(match name {
        "R1" => R1,
        "R2" => R2,
        "R3" => R3,
        "R4" => R4,
        "R5" => R5,
        "R6" => R6,
        _ => return None,
    })
}
