#pragma once

#include <string_view>

#include "cloudauth/svo/proof.hpp"
#include "cloudauth/svo/script_parser.hpp"

namespace cloudauth::svo {

// The bundled authentication derivation for the handshake: from the
// assumption sections (I*, R*, C*, P*, AUX*) to the goal
//
//     CServer believes (client says T)
//
// Stages D1-D3 establish, under the client's beliefs, that the delivered SK
// is a good key for talking to CServer; stages D4-D6 establish, under
// CServer's beliefs, that the stamp T was said - and freshly says-ed - by
// the client. Each stage expands into micro-steps so that every inference
// is a single checkable rule application.
//
// Encoding notes (deviations are deliberate and load-bearing):
//  - Conjunction inside an encrypted payload is encoded as a message tuple:
//    formulas may ride inside messages, but 'and' connects formulas only.
//  - P1 (interpretation) comprehends the key-delivery payload as sourced
//    from CServer and as asserting both the goodness and the freshness of
//    SK; that is what makes the jurisdiction step (A20) in D3 possible.
//  - I3 reads "CServer controls the goodness of SK", i.e. the controlled
//    formula is (client sharedkey[SK] CServer).
//  - C2 comprehends the stamp the client sent under the pre-shared key,
//    with its source recognized: the source-association axiom (A5) can
//    only fire inside CServer's beliefs for a key CServer already believes
//    in, and the only such key is PSK (premise I2, flipped by A22). A
//    stamp comprehended under SK would need an unstated assumption that
//    CServer believes SK good, which no assumption section supplies.
//  - AUX1 supplies CServer's belief in fresh(T), which D6 (A21) requires;
//    the assumption sections provide freshness only for SK.
//  - R1/R2 record the raw received messages and I4 the server-side SK
//    freshness; they are listed for completeness and cited by no step.
inline constexpr std::string_view kPaperDerivation = R"SVO(
# ---- assumption sections ----------------------------------------------
premise I1: client believes (client sharedkey[PSK] CServer)
premise I2: CServer believes (client sharedkey[PSK] CServer)
premise I3: client believes (CServer controls (client sharedkey[SK] CServer))
premise I4: CServer believes fresh(SK)
premise I5: client believes fresh(SK)
premise R1: client received enc{SK}[PSK]
premise R2: CServer received enc{T}[SK]
premise C1: client believes (client received enc{SK}[PSK])
premise C2: CServer believes (CServer received enc{T from(client)}[PSK])
premise P1: client believes (client received enc{SK}[PSK] -> client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK])
premise AUX1: CServer believes fresh(T)

# ---- D1: the client interprets what it received (MP under belief; C1, P1)
step D1.1: (client believes (client received enc{SK}[PSK]) and client believes (client received enc{SK}[PSK] -> client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK])) -> client believes (client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK]) ; by A1 with P := client, phi := client received enc{SK}[PSK], psi := client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK]
step D1.2: client believes (client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK]) ; by TAUT from C1, P1, D1.1

# ---- D2: source association (A5) under the client's beliefs; I1, D1
step D2.1: (client sharedkey[PSK] CServer and client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK]) -> (CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK))) ; by A5 with P := client, Q := CServer, R := client, k := PSK, X := (SK, client sharedkey[SK] CServer, fresh(SK))
step D2.2: client sharedkey[PSK] CServer -> (client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK] -> (client sharedkey[PSK] CServer and client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK])) ; by TAUT
step D2.3: client believes (client sharedkey[PSK] CServer -> (client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK] -> (client sharedkey[PSK] CServer and client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK]))) ; by NEC from D2.2
step D2.4: client believes ((client sharedkey[PSK] CServer and client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK]) -> (CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK)))) ; by NEC from D2.1
step D2.5: (client believes (client sharedkey[PSK] CServer) and client believes (client sharedkey[PSK] CServer -> (client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK] -> (client sharedkey[PSK] CServer and client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK])))) -> client believes (client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK] -> (client sharedkey[PSK] CServer and client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK])) ; by A1 with P := client, phi := client sharedkey[PSK] CServer, psi := client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK] -> (client sharedkey[PSK] CServer and client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK])
step D2.6: (client believes (client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK]) and client believes (client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK] -> (client sharedkey[PSK] CServer and client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK]))) -> client believes (client sharedkey[PSK] CServer and client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK]) ; by A1 with P := client, phi := client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK], psi := client sharedkey[PSK] CServer and client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK]
step D2.7: (client believes (client sharedkey[PSK] CServer and client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK]) and client believes ((client sharedkey[PSK] CServer and client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK]) -> (CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK))))) -> client believes (CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK))) ; by A1 with P := client, phi := client sharedkey[PSK] CServer and client received enc{(SK, client sharedkey[SK] CServer, fresh(SK)) from(CServer)}[PSK], psi := CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK))
step D2.8: client believes (CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK))) ; by TAUT from I1, D1.2, D2.3, D2.4, D2.5, D2.6, D2.7
# component extraction (A16): CServer said SK and CServer has SK
step D2.9: CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) -> (CServer said SK and CServer has SK) ; by A16 with P := CServer, Xs := (SK, client sharedkey[SK] CServer, fresh(SK)), Xi := SK
step D2.10: (CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK))) -> (CServer said SK and CServer has SK) ; by TAUT from D2.9
step D2.11: client believes ((CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK))) -> (CServer said SK and CServer has SK)) ; by NEC from D2.10
step D2.12: (client believes (CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK))) and client believes ((CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK))) -> (CServer said SK and CServer has SK))) -> client believes (CServer said SK and CServer has SK) ; by A1 with P := client, phi := CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK)), psi := CServer said SK and CServer has SK
step D2.13: client believes (CServer said SK and CServer has SK) ; by TAUT from D2.8, D2.11, D2.12

# ---- D3: the delivered SK is a good key, under the client's beliefs ----
# freshness lift (A18), said->says (A21), component says (A17),
# jurisdiction (A20) with I3; uses I5 for fresh(SK).
step D3.1: (CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK))) -> CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) ; by TAUT
step D3.2: client believes ((CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK))) -> CServer said (SK, client sharedkey[SK] CServer, fresh(SK))) ; by NEC from D3.1
step D3.3: (client believes (CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK))) and client believes ((CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK))) -> CServer said (SK, client sharedkey[SK] CServer, fresh(SK)))) -> client believes (CServer said (SK, client sharedkey[SK] CServer, fresh(SK))) ; by A1 with P := client, phi := CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer has (SK, client sharedkey[SK] CServer, fresh(SK)), psi := CServer said (SK, client sharedkey[SK] CServer, fresh(SK))
step D3.4: client believes (CServer said (SK, client sharedkey[SK] CServer, fresh(SK))) ; by TAUT from D2.8, D3.2, D3.3
step D3.5: fresh(SK) -> fresh((SK, client sharedkey[SK] CServer, fresh(SK))) ; by A18 with Xs := (SK, client sharedkey[SK] CServer, fresh(SK)), Xi := SK
step D3.6: client believes (fresh(SK) -> fresh((SK, client sharedkey[SK] CServer, fresh(SK)))) ; by NEC from D3.5
step D3.7: (client believes fresh(SK) and client believes (fresh(SK) -> fresh((SK, client sharedkey[SK] CServer, fresh(SK))))) -> client believes fresh((SK, client sharedkey[SK] CServer, fresh(SK))) ; by A1 with P := client, phi := fresh(SK), psi := fresh((SK, client sharedkey[SK] CServer, fresh(SK)))
step D3.8: client believes fresh((SK, client sharedkey[SK] CServer, fresh(SK))) ; by TAUT from I5, D3.6, D3.7
step D3.9: (fresh((SK, client sharedkey[SK] CServer, fresh(SK))) and CServer said (SK, client sharedkey[SK] CServer, fresh(SK))) -> CServer says (SK, client sharedkey[SK] CServer, fresh(SK)) ; by A21 with P := CServer, X := (SK, client sharedkey[SK] CServer, fresh(SK))
step D3.10: fresh((SK, client sharedkey[SK] CServer, fresh(SK))) -> (CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) -> (fresh((SK, client sharedkey[SK] CServer, fresh(SK))) and CServer said (SK, client sharedkey[SK] CServer, fresh(SK)))) ; by TAUT
step D3.11: client believes (fresh((SK, client sharedkey[SK] CServer, fresh(SK))) -> (CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) -> (fresh((SK, client sharedkey[SK] CServer, fresh(SK))) and CServer said (SK, client sharedkey[SK] CServer, fresh(SK))))) ; by NEC from D3.10
step D3.12: client believes ((fresh((SK, client sharedkey[SK] CServer, fresh(SK))) and CServer said (SK, client sharedkey[SK] CServer, fresh(SK))) -> CServer says (SK, client sharedkey[SK] CServer, fresh(SK))) ; by NEC from D3.9
step D3.13: (client believes fresh((SK, client sharedkey[SK] CServer, fresh(SK))) and client believes (fresh((SK, client sharedkey[SK] CServer, fresh(SK))) -> (CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) -> (fresh((SK, client sharedkey[SK] CServer, fresh(SK))) and CServer said (SK, client sharedkey[SK] CServer, fresh(SK)))))) -> client believes (CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) -> (fresh((SK, client sharedkey[SK] CServer, fresh(SK))) and CServer said (SK, client sharedkey[SK] CServer, fresh(SK)))) ; by A1 with P := client, phi := fresh((SK, client sharedkey[SK] CServer, fresh(SK))), psi := CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) -> (fresh((SK, client sharedkey[SK] CServer, fresh(SK))) and CServer said (SK, client sharedkey[SK] CServer, fresh(SK)))
step D3.14: (client believes (CServer said (SK, client sharedkey[SK] CServer, fresh(SK))) and client believes (CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) -> (fresh((SK, client sharedkey[SK] CServer, fresh(SK))) and CServer said (SK, client sharedkey[SK] CServer, fresh(SK))))) -> client believes (fresh((SK, client sharedkey[SK] CServer, fresh(SK))) and CServer said (SK, client sharedkey[SK] CServer, fresh(SK))) ; by A1 with P := client, phi := CServer said (SK, client sharedkey[SK] CServer, fresh(SK)), psi := fresh((SK, client sharedkey[SK] CServer, fresh(SK))) and CServer said (SK, client sharedkey[SK] CServer, fresh(SK))
step D3.15: (client believes (fresh((SK, client sharedkey[SK] CServer, fresh(SK))) and CServer said (SK, client sharedkey[SK] CServer, fresh(SK))) and client believes ((fresh((SK, client sharedkey[SK] CServer, fresh(SK))) and CServer said (SK, client sharedkey[SK] CServer, fresh(SK))) -> CServer says (SK, client sharedkey[SK] CServer, fresh(SK)))) -> client believes (CServer says (SK, client sharedkey[SK] CServer, fresh(SK))) ; by A1 with P := client, phi := fresh((SK, client sharedkey[SK] CServer, fresh(SK))) and CServer said (SK, client sharedkey[SK] CServer, fresh(SK)), psi := CServer says (SK, client sharedkey[SK] CServer, fresh(SK))
step D3.16: client believes (CServer says (SK, client sharedkey[SK] CServer, fresh(SK))) ; by TAUT from D3.8, D3.4, D3.11, D3.12, D3.13, D3.14, D3.15
step D3.17: CServer says (SK, client sharedkey[SK] CServer, fresh(SK)) -> (CServer said (SK, client sharedkey[SK] CServer, fresh(SK)) and CServer says (client sharedkey[SK] CServer)) ; by A17 with P := CServer, Xs := (SK, client sharedkey[SK] CServer, fresh(SK)), Xi := client sharedkey[SK] CServer
step D3.18: CServer says (SK, client sharedkey[SK] CServer, fresh(SK)) -> CServer says (client sharedkey[SK] CServer) ; by TAUT from D3.17
step D3.19: client believes (CServer says (SK, client sharedkey[SK] CServer, fresh(SK)) -> CServer says (client sharedkey[SK] CServer)) ; by NEC from D3.18
step D3.20: (client believes (CServer says (SK, client sharedkey[SK] CServer, fresh(SK))) and client believes (CServer says (SK, client sharedkey[SK] CServer, fresh(SK)) -> CServer says (client sharedkey[SK] CServer))) -> client believes (CServer says (client sharedkey[SK] CServer)) ; by A1 with P := client, phi := CServer says (SK, client sharedkey[SK] CServer, fresh(SK)), psi := CServer says (client sharedkey[SK] CServer)
step D3.21: client believes (CServer says (client sharedkey[SK] CServer)) ; by TAUT from D3.16, D3.19, D3.20
step D3.22: (CServer controls (client sharedkey[SK] CServer) and CServer says (client sharedkey[SK] CServer)) -> client sharedkey[SK] CServer ; by A20 with P := CServer, phi := client sharedkey[SK] CServer
step D3.23: CServer controls (client sharedkey[SK] CServer) -> (CServer says (client sharedkey[SK] CServer) -> (CServer controls (client sharedkey[SK] CServer) and CServer says (client sharedkey[SK] CServer))) ; by TAUT
step D3.24: client believes (CServer controls (client sharedkey[SK] CServer) -> (CServer says (client sharedkey[SK] CServer) -> (CServer controls (client sharedkey[SK] CServer) and CServer says (client sharedkey[SK] CServer)))) ; by NEC from D3.23
step D3.25: client believes ((CServer controls (client sharedkey[SK] CServer) and CServer says (client sharedkey[SK] CServer)) -> client sharedkey[SK] CServer) ; by NEC from D3.22
step D3.26: (client believes (CServer controls (client sharedkey[SK] CServer)) and client believes (CServer controls (client sharedkey[SK] CServer) -> (CServer says (client sharedkey[SK] CServer) -> (CServer controls (client sharedkey[SK] CServer) and CServer says (client sharedkey[SK] CServer))))) -> client believes (CServer says (client sharedkey[SK] CServer) -> (CServer controls (client sharedkey[SK] CServer) and CServer says (client sharedkey[SK] CServer))) ; by A1 with P := client, phi := CServer controls (client sharedkey[SK] CServer), psi := CServer says (client sharedkey[SK] CServer) -> (CServer controls (client sharedkey[SK] CServer) and CServer says (client sharedkey[SK] CServer))
step D3.27: (client believes (CServer says (client sharedkey[SK] CServer)) and client believes (CServer says (client sharedkey[SK] CServer) -> (CServer controls (client sharedkey[SK] CServer) and CServer says (client sharedkey[SK] CServer)))) -> client believes (CServer controls (client sharedkey[SK] CServer) and CServer says (client sharedkey[SK] CServer)) ; by A1 with P := client, phi := CServer says (client sharedkey[SK] CServer), psi := CServer controls (client sharedkey[SK] CServer) and CServer says (client sharedkey[SK] CServer)
step D3.28: (client believes (CServer controls (client sharedkey[SK] CServer) and CServer says (client sharedkey[SK] CServer)) and client believes ((CServer controls (client sharedkey[SK] CServer) and CServer says (client sharedkey[SK] CServer)) -> client sharedkey[SK] CServer)) -> client believes (client sharedkey[SK] CServer) ; by A1 with P := client, phi := CServer controls (client sharedkey[SK] CServer) and CServer says (client sharedkey[SK] CServer), psi := client sharedkey[SK] CServer
step D3.29: client believes (client sharedkey[SK] CServer) ; by TAUT from I3, D3.21, D3.24, D3.25, D3.26, D3.27, D3.28

# ---- D4: source association under CServer's beliefs; I2 (via A22), C2 --
step D4.1: (client sharedkey[PSK] CServer -> CServer sharedkey[PSK] client) and (CServer sharedkey[PSK] client -> client sharedkey[PSK] CServer) ; by A22 with P := client, Q := CServer, k := PSK
step D4.2: client sharedkey[PSK] CServer -> CServer sharedkey[PSK] client ; by TAUT from D4.1
step D4.3: CServer believes (client sharedkey[PSK] CServer -> CServer sharedkey[PSK] client) ; by NEC from D4.2
step D4.4: (CServer believes (client sharedkey[PSK] CServer) and CServer believes (client sharedkey[PSK] CServer -> CServer sharedkey[PSK] client)) -> CServer believes (CServer sharedkey[PSK] client) ; by A1 with P := CServer, phi := client sharedkey[PSK] CServer, psi := CServer sharedkey[PSK] client
step D4.5: CServer believes (CServer sharedkey[PSK] client) ; by TAUT from I2, D4.3, D4.4
step D4.6: (CServer sharedkey[PSK] client and CServer received enc{T from(client)}[PSK]) -> (client said T and client has T) ; by A5 with P := CServer, Q := client, R := CServer, k := PSK, X := T
step D4.7: CServer sharedkey[PSK] client -> (CServer received enc{T from(client)}[PSK] -> (CServer sharedkey[PSK] client and CServer received enc{T from(client)}[PSK])) ; by TAUT
step D4.8: CServer believes (CServer sharedkey[PSK] client -> (CServer received enc{T from(client)}[PSK] -> (CServer sharedkey[PSK] client and CServer received enc{T from(client)}[PSK]))) ; by NEC from D4.7
step D4.9: CServer believes ((CServer sharedkey[PSK] client and CServer received enc{T from(client)}[PSK]) -> (client said T and client has T)) ; by NEC from D4.6
step D4.10: (CServer believes (CServer sharedkey[PSK] client) and CServer believes (CServer sharedkey[PSK] client -> (CServer received enc{T from(client)}[PSK] -> (CServer sharedkey[PSK] client and CServer received enc{T from(client)}[PSK])))) -> CServer believes (CServer received enc{T from(client)}[PSK] -> (CServer sharedkey[PSK] client and CServer received enc{T from(client)}[PSK])) ; by A1 with P := CServer, phi := CServer sharedkey[PSK] client, psi := CServer received enc{T from(client)}[PSK] -> (CServer sharedkey[PSK] client and CServer received enc{T from(client)}[PSK])
step D4.11: (CServer believes (CServer received enc{T from(client)}[PSK]) and CServer believes (CServer received enc{T from(client)}[PSK] -> (CServer sharedkey[PSK] client and CServer received enc{T from(client)}[PSK]))) -> CServer believes (CServer sharedkey[PSK] client and CServer received enc{T from(client)}[PSK]) ; by A1 with P := CServer, phi := CServer received enc{T from(client)}[PSK], psi := CServer sharedkey[PSK] client and CServer received enc{T from(client)}[PSK]
step D4.12: (CServer believes (CServer sharedkey[PSK] client and CServer received enc{T from(client)}[PSK]) and CServer believes ((CServer sharedkey[PSK] client and CServer received enc{T from(client)}[PSK]) -> (client said T and client has T))) -> CServer believes (client said T and client has T) ; by A1 with P := CServer, phi := CServer sharedkey[PSK] client and CServer received enc{T from(client)}[PSK], psi := client said T and client has T
step D4.13: CServer believes (client said T and client has T) ; by TAUT from D4.5, C2, D4.8, D4.9, D4.10, D4.11, D4.12

# ---- D5: drop the possession conjunct (the stamp is atomic) ------------
step D5.1: (client said T and client has T) -> client said T ; by TAUT
step D5.2: CServer believes ((client said T and client has T) -> client said T) ; by NEC from D5.1
step D5.3: (CServer believes (client said T and client has T) and CServer believes ((client said T and client has T) -> client said T)) -> CServer believes (client said T) ; by A1 with P := CServer, phi := client said T and client has T, psi := client said T
step D5.4: CServer believes (client said T) ; by TAUT from D4.13, D5.2, D5.3

# ---- D6: nonce verification (A21) under CServer's beliefs; AUX1, D5 ----
step D6.1: (fresh(T) and client said T) -> client says T ; by A21 with P := client, X := T
step D6.2: fresh(T) -> (client said T -> (fresh(T) and client said T)) ; by TAUT
step D6.3: CServer believes (fresh(T) -> (client said T -> (fresh(T) and client said T))) ; by NEC from D6.2
step D6.4: CServer believes ((fresh(T) and client said T) -> client says T) ; by NEC from D6.1
step D6.5: (CServer believes fresh(T) and CServer believes (fresh(T) -> (client said T -> (fresh(T) and client said T)))) -> CServer believes (client said T -> (fresh(T) and client said T)) ; by A1 with P := CServer, phi := fresh(T), psi := client said T -> (fresh(T) and client said T)
step D6.6: (CServer believes (client said T) and CServer believes (client said T -> (fresh(T) and client said T))) -> CServer believes (fresh(T) and client said T) ; by A1 with P := CServer, phi := client said T, psi := fresh(T) and client said T
step D6.7: (CServer believes (fresh(T) and client said T) and CServer believes ((fresh(T) and client said T) -> client says T)) -> CServer believes (client says T) ; by A1 with P := CServer, phi := fresh(T) and client said T, psi := client says T
step D6.8: CServer believes (client says T) ; by TAUT from AUX1, D5.4, D6.3, D6.4, D6.5, D6.6, D6.7

goal: CServer believes (client says T)
)SVO";

// The bundled derivation, parsed. The text is a compile-time constant, so
// a parse failure here is a programming error.
inline ProofScript paper_derivation() {
  auto script = parse_script(kPaperDerivation);
  if (!script)
    throw std::logic_error("bundled derivation does not parse: " +
                           script.error().to_string());
  return script.value();
}

}  // namespace cloudauth::svo
