from .codec import AbstractNetworkCodec, LarkNetworkCodec, SourceSpan
