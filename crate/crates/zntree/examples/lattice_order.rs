//! The right-lexicographic order on `Z^n` and overflow-free coordinates.

use zntree::{Int, ZnVec};

fn main() {
    let a: ZnVec = "(7,0)".parse().unwrap();
    let b: ZnVec = "(-100,1)".parse().unwrap();
    // Any positive height beats any first-axis value.
    println!("{a} < {b}: {}", a < b);
    println!("height of {b} is {}, top index {:?}", b.height(), b.top_index());

    let sum = &a + &b;
    println!("{a} + {b} = {sum}");
    let far: ZnVec = "(1000000,0)".parse().unwrap();
    println!("{far} lies in [{a}, {b}]? {}", far.in_segment(&a, &b));

    // Coordinates promote to big integers instead of overflowing.
    let big = Int::from(i64::MAX);
    let twice = &big + &big;
    println!("i64::MAX + i64::MAX = {twice}");
    let half = ZnVec::from_ints(vec![twice, Int::ZERO]).half().unwrap();
    println!("halved back: {half}");
}
