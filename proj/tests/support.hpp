#pragma once

#include <doctest.h>

#include "fracspec/error.hpp"

// Checks that `expr` throws fracspec::Error with the given code.
#define CHECK_ERROR_CODE(expr, expected)                                        \
    do {                                                                        \
        bool thrown_ = false;                                                   \
        try {                                                                   \
            (void)(expr);                                                       \
        } catch (const fracspec::Error& e_) {                                   \
            thrown_ = true;                                                     \
            CHECK_MESSAGE(e_.code() == (expected), e_.what());                  \
        }                                                                       \
        CHECK_MESSAGE(thrown_, "expected " #expected " from " #expr);           \
    } while (0)
