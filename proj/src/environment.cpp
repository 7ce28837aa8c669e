#include "environment.hpp"

#include <sstream>

namespace berw {

namespace {

Dir parse_dir(const std::string& tok) {
    if (tok == "+x") return Dir::PlusX;
    if (tok == "-x") return Dir::MinusX;
    if (tok == "+y") return Dir::PlusY;
    if (tok == "-y") return Dir::MinusY;
    throw ContractError("bad direction token '" + tok + "' in stack file");
}

} // namespace

ScriptedEnvironment ScriptedEnvironment::parse(std::istream& in,
                                               std::shared_ptr<const Environment> base) {
    ScriptedEnvironment env(std::move(base));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string trimmed = line;
        auto first = trimmed.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (trimmed[first] == '#') continue;
        std::istringstream ls(trimmed);
        std::int64_t x, y;
        std::uint32_t k;
        std::string dir_tok;
        int cease;
        if (!(ls >> x >> y >> k >> dir_tok >> cease))
            throw ContractError("malformed stack record at line " + std::to_string(lineno));
        if (k == 0)
            throw ContractError("stack index 0 at line " + std::to_string(lineno));
        env.set({x, y}, k, {parse_dir(dir_tok), cease != 0});
    }
    return env;
}

void ScriptedEnvironment::set(Site s, std::uint32_t k, Instruction ins) {
    table_[address_key(s, k)] = ins;
}

Instruction ScriptedEnvironment::instruction_impl(Site s, std::uint32_t k) const {
    auto it = table_.find(address_key(s, k));
    if (it != table_.end()) return it->second;
    if (base_) return base_->instruction(s, k);
    throw ContractError("scripted stack has no instruction at " + site_str(s) + " k=" +
                        std::to_string(k));
}

} // namespace berw
