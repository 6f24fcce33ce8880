#pragma once

#include <exception>
#include <string>

#include "polsar/error.hpp"

namespace polsar {

template <typename F>
auto run_stage(const std::string& stage, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error(e.code(), stage + ": " + e.message());
  } catch (const std::exception& e) {
    throw Error(ErrorCode::InvalidArgument, stage + ": " + e.what());
  }
}

}  // namespace polsar
