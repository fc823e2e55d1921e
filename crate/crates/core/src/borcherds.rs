// placeholder
pub struct BorcherdsInput;
pub struct WeylData;
