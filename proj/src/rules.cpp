#include "blackjack/rules.hpp"

#include "blackjack/errors.hpp"

namespace blackjack {

Rules Rules::from_bits(std::string_view bits) {
    if (bits.size() != 3 || bits.find_first_not_of("01") != std::string_view::npos) {
        throw EngineError(ErrorCode::invalid_argument,
                          "rules mask must be three 0/1 characters (das, rsa, rsp)");
    }
    Rules rules;
    rules.das = bits[0] == '1';
    rules.rsa = bits[1] == '1';
    rules.rsp = bits[2] == '1';
    return rules;
}

std::string Rules::bits() const {
    return {das ? '1' : '0', rsa ? '1' : '0', rsp ? '1' : '0'};
}

}  // namespace blackjack
