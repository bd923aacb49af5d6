//! Small example theories used across tests and the command line docs.

/// Two birds: ethel the emu and tweety. Emus are birds strictly; birds
/// defeasibly fly; heaviness is evidence against flying (a defeater); a
/// broken wing defeasibly grounds a bird and beats the flying rule.
/// Ethel is defeasibly heavy, so neither flying conclusion sticks for
/// her; tweety flies.
pub const DBIRD: &str = "\
# birds: ethel the emu, tweety the bird
emu_ethel.
bird_tweety.
r1e: emu_ethel -> bird_ethel.
r1t: emu_tweety -> bird_tweety.
r2e: bird_ethel => flies_ethel.
r2t: bird_tweety => flies_tweety.
r3e: heavy_ethel ~> ~flies_ethel.
r3t: heavy_tweety ~> ~flies_tweety.
r4e: brokenWing_ethel => ~flies_ethel.
r4t: brokenWing_tweety => ~flies_tweety.
r5: => heavy_ethel.
r4e > r2e.
r4e > r2t.
r4t > r2e.
r4t > r2t.
";

/// The platypus: fur and milk argue for mammal, egg laying and a bill
/// argue against, and the for-rules each beat one against-rule. Both
/// attacking rules are beaten, so mammal_platypus goes through.
pub const PLATYPUS: &str = "\
monotreme_platypus.
hasFur_platypus.
laysEggs_platypus.
hasBill_platypus.
r1: monotreme_platypus => mammal_platypus.
r2: hasFur_platypus => mammal_platypus.
r3: laysEggs_platypus => ~mammal_platypus.
r4: hasBill_platypus => ~mammal_platypus.
r1 > r3.
r2 > r4.
";

/// A bird with a broken wing: the grounding rule beats the flying rule.
pub const BROKEN_WING: &str = "\
bird.
brokenWing.
r: bird => flies.
r2: brokenWing => ~flies.
r2 > r.
";

/// Two unopposed-strength rules for complementary conclusions: neither
/// side is provable, and both sides are refutable defeasibly.
pub const INTERFERENCE: &str = "\
r1: => a.
r2: => ~a.
";

/// A strict self-loop: p never becomes provable, and the loop also
/// blocks every negative conclusion about p.
pub const LOOP: &str = "\
p -> p.
";
