//! The six-state code: two message bits in, three coded bits out, plus one
//! closing bit. Prints the transition table and traces one message.

use locbal::fsm::{
    decode_fsm, default_table, encode_fsm, recover_final_state, FsmState, INITIAL_STATE,
};
use locbal::words::rds;
use locbal::Word;

fn main() -> locbal::Result<()> {
    let t = default_table();
    println!("state   00   01   10   11   final");
    for state in FsmState::ALL {
        let row: Vec<String> = (0..4u8)
            .map(|i| {
                let tr = t.transition(state, i).expect("complete table");
                format!("{}>{}", tr.output, tr.next)
            })
            .collect();
        println!(
            "{:>5}  {}  {}",
            state.name(),
            row.join(" "),
            t.final_bit(state)
        );
    }

    let msg: Word = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "10011101".into())
        .parse()?;
    let mut state = INITIAL_STATE;
    println!("\n{state}");
    for pair in msg.bits().chunks(2) {
        let tr = t
            .transition(state, pair[0] << 1 | pair[1])
            .expect("complete table");
        println!("  {}{} -> {} -> {}", pair[0], pair[1], tr.output, tr.next);
        state = tr.next;
    }

    let code = encode_fsm(&msg, &t)?;
    println!("codeword {code}");
    println!("rds      {:?}", rds(&code).values());
    println!("final    {}", recover_final_state(&code, &t)?);
    println!("decoded  {}", decode_fsm(&code, &t)?);
    Ok(())
}
