class CosheafToolsException(Exception):
    exit_status = 2


class InputError(CosheafToolsException):
    exit_status = 1


class DimensionMismatch(InputError):
    pass


class EndpointMismatch(InputError):
    pass


class PosetException(InputError):
    pass


class OpenSetException(InputError):
    pass


class OpenLatticeTooLarge(InputError):
    pass


class DocumentException(InputError):
    """Raised for malformed input documents. *field* names the offending
    document path (for example ``groups.a,b.relations``) and *line* is the
    source line when the JSON decoder reported one."""
    def __init__(self, message, field=None, line=None):
        self.detail = message
        self.field = field
        self.line = line
        context = []
        if line is not None:
            context.append('line {0}'.format(line))
        if field is not None:
            context.append('field {0}'.format(field))
        if context:
            message = '{0} ({1})'.format(message, ', '.join(context))
        super(DocumentException, self).__init__(message)


class ContractViolation(CosheafToolsException):
    exit_status = 2


class WellDefinednessError(ContractViolation):
    def __init__(self, message, column=None):
        self.column = column
        super(WellDefinednessError, self).__init__(message)


class FunctorialityError(ContractViolation):
    def __init__(self, message, lower=None, upper=None, chains=()):
        self.lower = lower
        self.upper = upper
        self.chains = tuple(chains)
        super(FunctorialityError, self).__init__(message)


class NaturalityError(ContractViolation):
    pass


class BoundaryError(ContractViolation):
    pass


class MissingTableEntry(ContractViolation):
    pass


class InternalConsistencyError(ContractViolation):
    pass


class VerificationMismatch(CosheafToolsException):
    exit_status = 3
