//! The model DSL: parsing, printing back, and error spans.

use sn_gts::frontend::{parse_model, print_model};

fn main() {
    let text = "class N = 4;
place Node : N;
place Edge : N*N;
trans Prune(n1, n2) [n1 != n2];
arc in Edge -> Prune : <n1,n2>;
arc inh Edge -o Prune : <n2,All>;
marking Node = <nd1> + <nd2>;
marking Edge = <nd1,nd2>;";
    let m = parse_model(text).unwrap();
    let printed = print_model(&m);
    print!("{}", printed);
    println!("round trip: {}", parse_model(&printed).unwrap() == m);
    println!("{}", parse_model("class N = 4; place P : N; arc in P -> T : <n1>;").unwrap_err());
}
