#pragma once

#include <string_view>
#include <vector>

namespace costsense::wordlist {

const std::vector<std::string_view>& common();
const std::vector<std::string_view>& ham();
const std::vector<std::string_view>& spam();
const std::vector<std::string_view>& tlds();

}  // namespace costsense::wordlist
