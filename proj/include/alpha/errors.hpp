#pragma once

#include <stdexcept>
#include <string>

namespace alpha {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// machine loop
struct StaleEvent : Error { using Error::Error; };
struct InvalidTime : Error { using Error::Error; };

// backends
struct BackendError : Error { using Error::Error; };
struct FixtureMiss : BackendError { using BackendError::BackendError; };
struct Timeout : BackendError { using BackendError::BackendError; };
struct TransportFailure : BackendError { using BackendError::BackendError; };
struct NonSuccessStatus : BackendError { using BackendError::BackendError; };
struct UnknownPromptId : Error { using Error::Error; };

// parsing of model output
struct MalformedDescription : Error { using Error::Error; };
struct MalformedProposal : Error { using Error::Error; };
struct MalformedPlan : Error { using Error::Error; };
struct EmptySynthesis : Error { using Error::Error; };
struct EmptyCondensation : Error { using Error::Error; };
struct MalformedRecord : Error { using Error::Error; };

// tools and search
struct UnknownTool : Error { using Error::Error; };
struct DuplicateTool : Error { using Error::Error; };
struct ProviderUnavailable : Error { using Error::Error; };
struct UnknownFixtureQuery : Error { using Error::Error; };

// memory store
struct PersistenceFailure : Error { using Error::Error; };
struct DuplicateId : Error { using Error::Error; };

// delivery
struct SinkFailure : Error { using Error::Error; };

// scenario / config files
struct ParseError : Error { using Error::Error; };
struct MissingFixture : Error { using Error::Error; };

} // namespace alpha
